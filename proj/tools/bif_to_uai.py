#!/usr/bin/env python3
"""Convert a discrete BIF Bayesian network into a UAI MARKOV model.

Each CPT becomes one factor over (parents..., child) with the child varying
fastest, so BAYES and MARKOV readers see the same numbers.
"""
import argparse
import re
import sys


def parse_bif(text):
    variables = {}
    order = []
    for m in re.finditer(r"variable\s+(\S+)\s*\{[^}]*?type\s+discrete\s*\[\s*(\d+)\s*\]\s*\{([^}]*)\}", text):
        name, card, states = m.group(1), int(m.group(2)), [s.strip() for s in m.group(3).split(",")]
        if len(states) != card:
            raise ValueError(f"state count mismatch for {name}")
        variables[name] = states
        order.append(name)

    cpts = []
    for m in re.finditer(r"probability\s*\(\s*([^)]*)\)\s*\{([^}]*)\}", text):
        head = m.group(1)
        child, _, rest = head.partition("|")
        child = child.strip()
        parents = [p.strip() for p in rest.split(",") if p.strip()]
        body = m.group(2)
        scope = parents + [child]
        cards = [len(variables[v]) for v in scope]
        size = 1
        for c in cards:
            size *= c
        values = [None] * size
        child_card = cards[-1]
        table = re.search(r"table\s+([^;]*);", body)
        if table:
            nums = [float(x) for x in table.group(1).replace(",", " ").split()]
            if parents:
                # BIF "table" lists the child slowest; transpose to child fastest.
                n_par = size // child_card
                for c in range(child_card):
                    for j in range(n_par):
                        values[j * child_card + c] = nums[c * n_par + j]
            else:
                values = nums
        for row in re.finditer(r"\(([^)]*)\)\s*([^;]*);", body):
            states = [s.strip() for s in row.group(1).split(",")]
            nums = [float(x) for x in row.group(2).replace(",", " ").split()]
            idx = 0
            for p, s in zip(parents, states):
                idx = idx * len(variables[p]) + variables[p].index(s)
            values[idx * child_card: (idx + 1) * child_card] = nums
        if any(v is None for v in values) or len(values) != size:
            raise ValueError(f"incomplete CPT for {child}")
        cpts.append((scope, values))
    return order, variables, cpts


def write_uai(order, variables, cpts, out):
    index = {name: i for i, name in enumerate(order)}
    out.write("MARKOV\n")
    out.write(f"{len(order)}\n")
    out.write(" ".join(str(len(variables[v])) for v in order) + "\n")
    out.write(f"{len(cpts)}\n")
    for scope, _ in cpts:
        out.write(f"{len(scope)} " + " ".join(str(index[v]) for v in scope) + "\n")
    out.write("\n")
    for _, values in cpts:
        out.write(f"{len(values)}\n")
        out.write(" ".join(repr(v) for v in values) + "\n\n")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("bif")
    ap.add_argument("-o", "--out", default="-")
    args = ap.parse_args()
    with open(args.bif) as f:
        order, variables, cpts = parse_bif(f.read())
    if args.out == "-":
        write_uai(order, variables, cpts, sys.stdout)
    else:
        with open(args.out, "w") as f:
            write_uai(order, variables, cpts, f)


if __name__ == "__main__":
    main()
