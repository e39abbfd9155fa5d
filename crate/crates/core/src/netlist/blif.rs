//! BLIF reader and writer
//!
//! Supported subset: `.model`, `.inputs`, `.outputs`, `.names`, `.latch` and `.end`.
//! Latches are cut: the latch output becomes a primary input and the latch input a primary output.

use std::collections::HashMap;
use std::fmt::Write;

use log::warn;
use thiserror::Error;

use super::{Cube, Network, NodeId, Sop, MAX_CUBE_VARS};
use crate::minimize::isop_exact;
use crate::truth::MAX_VARS;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BlifError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: undefined signal {name}")]
    Undefined { line: usize, name: String },
    #[error("line {line}: signal {name} is defined more than once")]
    Duplicate { line: usize, name: String },
    #[error("combinational cycle through signal {name}")]
    Cycle { name: String },
}

fn syntax(line: usize, msg: impl Into<String>) -> BlifError {
    BlifError::Syntax { line, msg: msg.into() }
}

struct NamesBlock {
    line: usize,
    inputs: Vec<String>,
    output: String,
    rows: Vec<(Cube, bool)>,
}

#[derive(Clone, Copy)]
enum Def {
    Pi,
    Names(usize),
}

/// Logical lines with their starting line number; comments stripped, continuations joined
fn logical_lines(text: &str) -> Vec<(usize, String)> {
    let mut ret = Vec::new();
    let mut current = String::new();
    let mut start = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if current.is_empty() {
            start = i + 1;
        }
        let trimmed = line.trim_end();
        if let Some(stripped) = trimmed.strip_suffix('\\') {
            current.push_str(stripped);
            current.push(' ');
            continue;
        }
        current.push_str(trimmed);
        if !current.trim().is_empty() {
            ret.push((start, current.trim().to_string()));
        }
        current.clear();
    }
    if !current.trim().is_empty() {
        ret.push((start, current.trim().to_string()));
    }
    ret
}

fn parse_row(line: usize, tokens: &[&str], nb_inputs: usize) -> Result<(Cube, bool), BlifError> {
    let (pattern, out) = match (nb_inputs, tokens) {
        (0, [out]) => ("", *out),
        (_, [pattern, out]) if nb_inputs > 0 => (*pattern, *out),
        _ => return Err(syntax(line, "malformed cube line")),
    };
    if pattern.len() != nb_inputs {
        return Err(syntax(
            line,
            format!("cube has {} entries for {} inputs", pattern.len(), nb_inputs),
        ));
    }
    let mut cube = Cube::full();
    for (i, ch) in pattern.chars().enumerate() {
        let lit = match ch {
            '1' => Some(true),
            '0' => Some(false),
            '-' => None,
            _ => return Err(syntax(line, format!("invalid cube character '{ch}'"))),
        };
        cube = cube.with_literal(i, lit);
    }
    let value = match out {
        "1" => true,
        "0" => false,
        _ => return Err(syntax(line, format!("invalid output value '{out}'"))),
    };
    Ok((cube, value))
}

/// Convert a `.names` block into a fanin list and an on-set SOP, merging repeated inputs
fn block_function(block: &NamesBlock) -> Result<(Vec<String>, Sop), BlifError> {
    let n = block.inputs.len();
    let on_set = block.rows.iter().all(|(_, v)| *v);
    let off_set = block.rows.iter().all(|(_, v)| !*v);
    if !on_set && !off_set {
        return Err(syntax(block.line, "cover mixes on-set and off-set rows"));
    }
    let mut sop = Sop::new(n, block.rows.iter().map(|(c, _)| *c).collect());
    let mut names = block.inputs.clone();
    let mut i = 0;
    while i < names.len() {
        if let Some(j) = names[..i].iter().position(|x| *x == names[i]) {
            sop = sop.merge_vars(j, i, false);
            names.remove(i);
        } else {
            i += 1;
        }
    }
    if !on_set && !block.rows.is_empty() {
        if names.len() > MAX_VARS {
            return Err(syntax(
                block.line,
                format!("off-set cover with more than {MAX_VARS} inputs is not supported"),
            ));
        }
        sop = isop_exact(&!sop.truth_table());
    }
    Ok((names, sop))
}

/// Read a network from BLIF text
pub fn parse_blif(text: &str) -> Result<Network, BlifError> {
    let mut model = None;
    let mut inputs: Vec<(usize, String)> = Vec::new();
    let mut outputs: Vec<(usize, String)> = Vec::new();
    let mut latches: Vec<(usize, String, String)> = Vec::new();
    let mut blocks: Vec<NamesBlock> = Vec::new();
    let mut in_names = false;
    let mut skipping = false;
    let mut ended = false;

    for (line, content) in logical_lines(text) {
        if ended {
            break;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let head = tokens[0];
        if !head.starts_with('.') {
            if skipping {
                continue;
            }
            if !in_names {
                return Err(syntax(line, format!("unexpected line '{content}'")));
            }
            let block = blocks.last_mut().unwrap();
            let row = parse_row(line, &tokens, block.inputs.len())?;
            block.rows.push(row);
            continue;
        }
        in_names = false;
        skipping = false;
        match head {
            ".model" => {
                if model.is_some() {
                    warn!("line {line}: only the first .model is read");
                    break;
                }
                model = Some(tokens.get(1).unwrap_or(&"top").to_string());
            }
            ".inputs" => inputs.extend(tokens[1..].iter().map(|s| (line, s.to_string()))),
            ".outputs" => outputs.extend(tokens[1..].iter().map(|s| (line, s.to_string()))),
            ".names" => {
                if tokens.len() < 2 {
                    return Err(syntax(line, ".names without output signal"));
                }
                let signals = &tokens[1..];
                if signals.len() - 1 > MAX_CUBE_VARS {
                    return Err(syntax(line, format!("more than {MAX_CUBE_VARS} fanins")));
                }
                blocks.push(NamesBlock {
                    line,
                    inputs: signals[..signals.len() - 1].iter().map(|s| s.to_string()).collect(),
                    output: signals[signals.len() - 1].to_string(),
                    rows: Vec::new(),
                });
                in_names = true;
            }
            ".latch" => {
                if tokens.len() < 3 {
                    return Err(syntax(line, ".latch needs an input and an output"));
                }
                latches.push((line, tokens[1].to_string(), tokens[2].to_string()));
            }
            ".end" => ended = true,
            _ => {
                warn!("line {line}: skipping unsupported directive {head}");
                skipping = true;
            }
        }
    }

    let mut defs: HashMap<String, (usize, Def)> = HashMap::new();
    let mut define = |name: &str, line: usize, def: Def| -> Result<(), BlifError> {
        if defs.insert(name.to_string(), (line, def)).is_some() {
            return Err(BlifError::Duplicate {
                line,
                name: name.to_string(),
            });
        }
        Ok(())
    };
    for (line, name) in &inputs {
        define(name, *line, Def::Pi)?;
    }
    for (line, _, out) in &latches {
        define(out, *line, Def::Pi)?;
    }
    for (i, b) in blocks.iter().enumerate() {
        define(&b.output, b.line, Def::Names(i))?;
    }

    let mut net = Network::new(model.as_deref().unwrap_or("top"));
    let mut ids: HashMap<String, NodeId> = HashMap::new();
    for (_, name) in &inputs {
        ids.insert(name.clone(), net.add_pi(name));
    }
    for (_, _, out) in &latches {
        ids.insert(out.clone(), net.add_pi(out));
    }

    let functions = blocks.iter().map(block_function).collect::<Result<Vec<_>, _>>()?;

    // Iterative DFS so that deep netlists do not overflow the stack
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let mut marks = vec![Mark::New; blocks.len()];
    for root in 0..blocks.len() {
        if marks[root] != Mark::New {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        marks[root] = Mark::Active;
        while let Some(&mut (b, ref mut next)) = stack.last_mut() {
            let fanins = &functions[b].0;
            if *next < fanins.len() {
                let name = &fanins[*next];
                *next += 1;
                match defs.get(name) {
                    None => {
                        return Err(BlifError::Undefined {
                            line: blocks[b].line,
                            name: name.clone(),
                        })
                    }
                    Some((_, Def::Pi)) => (),
                    Some((_, Def::Names(c))) => match marks[*c] {
                        Mark::Done => (),
                        Mark::Active => {
                            return Err(BlifError::Cycle { name: name.clone() });
                        }
                        Mark::New => {
                            marks[*c] = Mark::Active;
                            stack.push((*c, 0));
                        }
                    },
                }
            } else {
                let (names, sop) = &functions[b];
                let fanins = names.iter().map(|n| ids[n]).collect();
                let id = net
                    .add_node(&blocks[b].output, fanins, sop.clone())
                    .expect("fanins are created first");
                ids.insert(blocks[b].output.clone(), id);
                marks[b] = Mark::Done;
                stack.pop();
            }
        }
    }

    let mut po_names: HashMap<String, usize> = HashMap::new();
    for (line, name) in &outputs {
        let Some(&id) = ids.get(name) else {
            return Err(BlifError::Undefined {
                line: *line,
                name: name.clone(),
            });
        };
        if po_names.insert(name.clone(), *line).is_some() {
            return Err(BlifError::Duplicate {
                line: *line,
                name: name.clone(),
            });
        }
        net.add_po(name, id);
    }
    for (line, input, _) in &latches {
        let Some(&id) = ids.get(input) else {
            return Err(BlifError::Undefined {
                line: *line,
                name: input.clone(),
            });
        };
        if !po_names.contains_key(input) {
            po_names.insert(input.clone(), *line);
            net.add_po(input, id);
        }
    }
    Ok(net)
}

/// Write a network as BLIF text
///
/// Outputs whose name differs from their driver's name get an explicit buffer.
pub fn write_blif(net: &Network) -> String {
    let mut s = String::new();
    writeln!(s, ".model {}", net.name()).unwrap();
    let pis: Vec<&str> = net.pis().iter().map(|p| net.node(*p).name()).collect();
    let pos: Vec<&str> = net.pos().iter().map(|(n, _)| n.as_str()).collect();
    write_list(&mut s, ".inputs", &pis);
    write_list(&mut s, ".outputs", &pos);
    for id in net.topological_order() {
        let node = net.node(id);
        let mut signals: Vec<&str> = node.fanins().iter().map(|f| net.node(*f).name()).collect();
        signals.push(node.name());
        write_list(&mut s, ".names", &signals);
        let n = node.fanins().len();
        for c in node.function().cubes() {
            if n == 0 {
                s.push_str("1\n");
            } else {
                writeln!(s, "{} 1", c.to_pattern(n)).unwrap();
            }
        }
    }
    for (name, driver) in net.pos() {
        let dname = net.node(*driver).name();
        if dname != name {
            writeln!(s, ".names {dname} {name}\n1 1").unwrap();
        }
    }
    s.push_str(".end\n");
    s
}

fn write_list(s: &mut String, head: &str, items: &[&str]) {
    s.push_str(head);
    let mut width = head.len();
    for it in items {
        if width + it.len() + 1 > 78 {
            s.push_str(" \\\n");
            width = 0;
        }
        s.push(' ');
        s.push_str(it);
        width += it.len() + 1;
    }
    s.push('\n');
}
