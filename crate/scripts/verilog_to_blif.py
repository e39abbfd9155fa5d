#!/usr/bin/env python3
"""Convert a flat gate-level Verilog netlist (ISCAS-85 style) to BLIF.

Supports the primitives and, nand, or, nor, xor, xnor, not, buf and
simple `assign a = b;` aliases and constants.
"""
import re
import sys


def cubes(kind, n):
    if kind == "and":
        return ["1" * n + " 1"]
    if kind == "nand":
        return ["-" * i + "0" + "-" * (n - i - 1) + " 1" for i in range(n)]
    if kind == "or":
        return ["-" * i + "1" + "-" * (n - i - 1) + " 1" for i in range(n)]
    if kind == "nor":
        return ["0" * n + " 1"]
    if kind in ("xor", "xnor"):
        want = 1 if kind == "xor" else 0
        rows = []
        for m in range(1 << n):
            bits = [(m >> (n - 1 - i)) & 1 for i in range(n)]
            if sum(bits) % 2 == want:
                rows.append("".join(map(str, bits)) + " 1")
        return rows
    if kind == "not":
        return ["0 1"]
    if kind == "const0":
        return []
    if kind == "const1":
        return ["1"]
    if kind == "buf":
        return ["1 1"]
    raise ValueError(kind)


def main(path):
    text = re.sub(r"//.*", "", open(path).read())
    stmts = [s.strip() for s in text.split(";")]
    model = None
    inputs, outputs, gates = [], [], []
    for s in stmts:
        s = " ".join(s.split())
        if not s:
            continue
        m = re.match(r"module (\w+)", s)
        if m:
            model = m.group(1)
            continue
        m = re.match(r"(input|output|wire) (.*)", s)
        if m:
            names = [x.strip() for x in m.group(2).split(",")]
            if m.group(1) == "input":
                inputs += names
            elif m.group(1) == "output":
                outputs += names
            continue
        m = re.match(r"assign (\S+) = 1'b([01])", s)
        if m:
            gates.append(("const" + m.group(2), m.group(1), []))
            continue
        m = re.match(r"assign (\S+) = (\S+)", s)
        if m:
            gates.append(("buf", m.group(1), [m.group(2)]))
            continue
        m = re.match(r"(and|nand|or|nor|xor|xnor|not|buf) \w+ \((.*)\)", s)
        if m:
            pins = [x.strip() for x in m.group(2).split(",")]
            gates.append((m.group(1), pins[0], pins[1:]))
            continue
        if s.startswith("endmodule"):
            continue
        raise ValueError("unhandled: " + s)
    out = [f".model {model}", ".inputs " + " ".join(inputs), ".outputs " + " ".join(outputs)]
    for kind, o, ins in gates:
        out.append(".names " + " ".join(ins + [o]))
        out += cubes(kind, len(ins))
    out.append(".end")
    print("\n".join(out))


if __name__ == "__main__":
    main(sys.argv[1])
