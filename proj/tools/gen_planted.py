#!/usr/bin/env python3
"""Generate the planted-Trojan acceptance circuit and its labels file.

Host: a 32-bit input bus a0..a31 is registered (r_i = DFF(a_i)) and compared
bitwise (q_i = XNOR(a_i, r_i)); u_k = AND of one nibble's q bits flags "nibble
k unchanged since last cycle". A random datapath over a_i, r_i and u_k feeds
the outputs. Datapath gates whose transition entropy falls below a floor are
rejected, so the clean logic stays away from the near-zero entropy region.

Trojan: an 8-input AND tree over u_0..u_7 (fires only when the whole bus is
stable for a cycle) enables a payload that XORs into one output.

Usage: gen_planted.py OUT_DIR [--seed N]
"""

import argparse
import math
import pathlib
import random

import numpy as np

BUS = 32
HOST_GATES = 118
OUTPUTS = 8
ENTROPY_FLOOR = 0.2
SAMPLES = 1 << 16

OPS = {
    "AND": lambda x, y: x & y,
    "NAND": lambda x, y: ~(x & y) & 1,
    "OR": lambda x, y: x | y,
    "NOR": lambda x, y: ~(x | y) & 1,
    "XOR": lambda x, y: x ^ y,
    "XNOR": lambda x, y: ~(x ^ y) & 1,
}
KINDS = ["XOR", "XNOR", "XOR", "AND", "OR", "NAND", "NOR"]


def transition_entropy(seq):
    p = float(np.count_nonzero(seq[1:] != seq[:-1])) / (len(seq) - 1)
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log(p) - (1 - p) * math.log(1 - p)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("out_dir")
    ap.add_argument("--seed", type=int, default=2024)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    nrng = np.random.default_rng(args.seed)

    lines = ["# planted-Trojan acceptance circuit (generated by tools/gen_planted.py)"]
    values = {}
    inputs = [f"a{i}" for i in range(BUS)] + ["x"]
    for name in inputs:
        lines.append(f"INPUT({name})")
        values[name] = nrng.integers(0, 2, SAMPLES, dtype=np.uint8)

    body = []
    for i in range(BUS):
        a = values[f"a{i}"]
        values[f"r{i}"] = np.concatenate(([0], a[:-1])).astype(np.uint8)
        values[f"q{i}"] = (~(a ^ values[f"r{i}"]) & 1).astype(np.uint8)
        body.append(f"r{i} = DFF(a{i})")
        body.append(f"q{i} = XNOR(a{i}, r{i})")
    for k in range(8):
        qs = [f"q{4 * k + j}" for j in range(4)]
        values[f"u{k}"] = np.bitwise_and.reduce([values[q] for q in qs])
        body.append(f"u{k} = AND({', '.join(qs)})")

    pool = [f"a{i}" for i in range(BUS)] + [f"r{i}" for i in range(BUS)] + [f"u{k}" for k in range(8)]
    host = []
    while len(host) < HOST_GATES:
        kind = rng.choice(KINDS)
        # favour recent gates so the datapath gets some depth
        recent = host[-12:] if host else []
        x = rng.choice(recent) if recent and rng.random() < 0.6 else rng.choice(pool)
        y = rng.choice(pool + host)
        if x == y:
            continue
        v = OPS[kind](values[x], values[y]).astype(np.uint8)
        if transition_entropy(v) < ENTROPY_FLOOR:
            continue
        name = f"h{len(host)}"
        values[name] = v
        host.append(name)
        body.append(f"{name} = {kind}({x}, {y})")

    trojan = ["t1_0", "t1_1", "t1_2", "t1_3", "t2_0", "t2_1", "trig", "pay", "y"]
    body += [
        "t1_0 = AND(u0, u1)",
        "t1_1 = AND(u2, u3)",
        "t1_2 = AND(u4, u5)",
        "t1_3 = AND(u6, u7)",
        "t2_0 = AND(t1_0, t1_1)",
        "t2_1 = AND(t1_2, t1_3)",
        "trig = AND(t2_0, t2_1)",
        "pay = AND(trig, x)",
        f"y = XOR({host[-1]}, pay)",
    ]
    outputs = host[-OUTPUTS - 1 : -1] + ["y"]
    for o in outputs:
        lines.append(f"OUTPUT({o})")
    lines += body

    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "planted_trojan.bench").write_text("\n".join(lines) + "\n")
    (out / "planted_trojan.labels").write_text(
        "# Trojan wires of planted_trojan.bench: trigger tree, payload enable, payload output\n"
        + "\n".join(trojan)
        + "\n"
    )
    gates = sum(1 for ln in body)
    print(f"{len(inputs)} inputs, {gates} gates, {len(outputs)} outputs, {len(trojan)} Trojan wires")


if __name__ == "__main__":
    main()
