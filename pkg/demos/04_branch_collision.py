"""Two independent branch structures pass through each other.

Two qubits sit at opposite ends of a field chain.  Each imprints a
record, and the records are carried inward by swaps until they cross
in the middle.  Because the qubits started uncorrelated, the branches
combine multiplicatively (2 x 2 = 4 equal worlds) and crossing leaves
no trace: the transit sites return to purity and the qubits stay
uncorrelated throughout.
"""

import math

import branchsim as bs


def main():
    config = bs.scenario_collision(4)
    states = config.run()
    n = states[0].lattice.n_sites

    for t, state in enumerate(states):
        decomp = bs.branch_decompose(state)
        clusters = bs.extended_branch_clusters(state)
        parts = [c.sites for c in clusters.clusters]
        print(f"t={t}: {decomp.n_branches} branch(es), "
              f"weights {[round(w, 4) for w in decomp.weights]}, "
              f"clusters {parts}")

    print("\ntransit sites during the crossing (step 2): purity of sites 1..4")
    mid = states[2]
    for k in range(1, n - 1):
        p = bs.purity(bs.reduced_density_matrix(mid, [k]))
        print(f"  site {k}: purity {p:.12f}")

    final = states[-1]
    print("\nmutual information at the final step (nats; 2 ln 2 = "
          f"{2 * math.log(2):.4f}):")
    pairs = [(0, 5), (0, 3), (5, 2), (0, 2), (5, 3)]
    for a, b in pairs:
        mi = bs.mutual_information(final, [a], [b])
        print(f"  I({a}:{b}) = {mi:.12f}")

    print("\neach qubit is perfectly correlated with its own (displaced)")
    print("record and carries no information about the other qubit: the")
    print("collision re-sorted the records without merging the worlds.")


if __name__ == "__main__":
    main()
