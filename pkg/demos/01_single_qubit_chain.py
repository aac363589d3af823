"""A single qubit decoheres into a chain of records.

One system qubit in an even superposition couples to the first field
site, and the imprint is then copied outward one site per step.  Watch
three things happen at once:

* the global state stays a two-term superposition the whole time,
* the qubit's reduced density matrix loses its off-diagonal entries
  after the very first coupling and never recovers them,
* sites ahead of the copy front remain in a pure product state -- the
  record spreads at exactly one site per step (a strict light cone).
"""

import math

import branchsim as bs


def show_state(label, state):
    parts = [f"{amp.real:+.4f} |{''.join(map(str, bits))}>"
             for bits, amp in state.terms()]
    print(f"  {label}: " + "  ".join(parts))


def site_table(states):
    sites = states[0].lattice.indices
    print("\n  per-site purity (rows = steps, columns = sites 0..%d)" % sites[-1])
    print("  step  " + "".join(f"  s{k}   " for k in sites))
    for t, state in enumerate(states):
        cells = []
        for k in sites:
            p = bs.purity(bs.reduced_density_matrix(state, [k]))
            cells.append(f"{p:6.3f} ")
        print(f"   t={t}  " + "".join(cells))


def main():
    a = 1 / math.sqrt(2)
    states = bs.scenario_single(a, a, 4).run()

    print("state sequence (system qubit = leftmost bit):")
    for t, state in enumerate(states):
        show_state(f"t={t}", state)

    rho0 = bs.reduced_density_matrix(states[1], [0])
    print(f"\nqubit after first coupling: coherence = "
          f"{bs.coherence(rho0):.3e}, purity = {bs.purity(rho0):.4f}")
    print("(a dephased, maximally mixed qubit: the field site now carries")
    print(" a perfect which-path record)")

    site_table(states)

    print("\nlight cone on a 12-site chain: first step at which each site")
    print("stops being pure (i.e. the record has arrived):")
    long = bs.scenario_single(a, a, 12).run()
    arrivals = []
    for k in range(1, 13):
        hit = next((t for t, s in enumerate(long)
                    if bs.purity(bs.reduced_density_matrix(s, [k])) < 1 - 1e-10),
                   None)
        arrivals.append(f"site {k:2d}: t={hit}")
    for line in arrivals:
        print("  " + line)


if __name__ == "__main__":
    main()
