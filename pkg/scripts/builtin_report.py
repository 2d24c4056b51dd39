#!/usr/bin/env python3
"""One-stop report over the builtin states.

For every builtin pure state at p = 1: the six-setting inequality values
Q_AB / Q_BA against the classical bound L, the reduced-state negativity,
and the tripartite-entanglement verdict. Equivalent to
``cyclesteer table`` but in a fixed-width layout for quick reading.
"""

from cyclesteer.entanglement import gte_criterion, negativity
from cyclesteer.states import BUILTIN_IDS, build_family, builtin_state, reduce_pair, swap_state
from cyclesteer.steering import icosahedron_settings, lhs_bound_L, quantum_value_Q


def main():
    ico = icosahedron_settings()
    L = lhs_bound_L(ico)[0]
    print(f"classical bound L = {L:.6f}\n")
    print(f"{'state':>6}  {'Q_AB':>9}  {'Q_BA':>9}  {'neg(AB)':>8}  {'gte':>5}")
    for sid in BUILTIN_IDS:
        rho3 = build_family(builtin_state(sid).normalized(), 1.0)
        rho_ab = reduce_pair(rho3, "AB")
        q_ab = quantum_value_Q(rho_ab, ico)[0]
        q_ba = quantum_value_Q(swap_state(rho_ab), ico)[0]
        gte = gte_criterion(rho3).detected
        print(f"{sid:>6}  {q_ab:>9.5f}  {q_ba:>9.5f}  "
              f"{negativity(rho_ab, 0):>8.5f}  {str(gte):>5}")


if __name__ == "__main__":
    main()
