"""Sampling a record reproduces the branch weights.

A biased qubit (weight 2/3 up, 1/3 down) writes records down the
chain.  Measuring any record site then draws a branch with its Born
weight, and the post-measurement state collapses to exactly that
branch -- a single world, properly renormalized.

Repeated seeded measurements give the frequency histogram below; the
same seed always reproduces the same outcome.
"""

import math

import branchsim as bs


def main():
    state = bs.scenario_single(math.sqrt(2 / 3), math.sqrt(1 / 3), 4).run()[3]
    decomp = bs.branch_decompose(state)
    print("branch weights before measurement:")
    for branch in decomp.branches:
        print(f"  qubit={branch.assignment[0]}  weight {branch.weight:.6f}")

    setting = bs.MeasurementSetting(1)   # measure the first record site
    n = 5000
    counts = [0, 0]
    for seed in range(n):
        outcome, post = bs.sample_measurement(state, setting, seed)
        counts[outcome] += 1
        if seed < 3:
            n_branches = bs.branch_decompose(post).n_branches
            print(f"\nseed {seed}: outcome {outcome} "
                  f"-> post-measurement state has {n_branches} branch(es):")
            for bits, amp in post.terms():
                print(f"    {amp.real:+.4f} |{''.join(map(str, bits))}>")

    print(f"\n{n} seeded draws of site 1:")
    for bit, label, expect in [(0, "up  (qubit was 1)", 1 / 3),
                               (1, "down (qubit was 0)", 2 / 3)]:
        freq = counts[bit] / n
        bar = "#" * int(round(freq * 50))
        print(f"  {label}: {counts[bit]:5d}  freq {freq:.4f} "
              f"(expect {expect:.4f})  {bar}")

    again, _ = bs.sample_measurement(state, setting, 1234)
    again2, _ = bs.sample_measurement(state, setting, 1234)
    print(f"\nsame seed, same outcome: {again} == {again2}")


if __name__ == "__main__":
    main()
