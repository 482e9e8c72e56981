"""Walk through the four-item market with no pure equilibrium.

Prints the full discrete payoff table, confirms that no profile survives
best-response scrutiny, and then follows round-robin best-response dynamics
until they bite their own tail.
"""

import argparse

from vcgames import (
    br_dynamics,
    counterexample_instance,
    format_rational,
    payoff_table,
    pmvc_best_response,
    pmvc_pure_ne,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--start", default="{a}|{c}", help="profile to start the dynamics from"
    )
    parser.add_argument(
        "--max-steps", type=int, default=100, help="dynamics step cap"
    )
    args = parser.parse_args()

    g = counterexample_instance()
    print("vendor catalogues:", " | ".join(
        g.universe.format_set(m) for m in g.vendor_masks
    ))
    print()

    print("discrete payoff table (offer profile, vendor payoffs):")
    for out in payoff_table(g):
        pays = "  ".join(format_rational(x) for x in out.vendor_payoffs)
        print(f"  {out.profile.format(g.universe):<14} {pays}")
    print()

    nes = pmvc_pure_ne(g)
    print(f"pure equilibria found: {len(nes)}")
    for s in nes:
        print("  ", s.format(g.universe))
    if not nes:
        # show the refuting deviation for one tempting-looking profile
        s = g.parse_profile(args.start)
        for i in range(g.n_vendors):
            best = pmvc_best_response(g, i, s)
            print(
                f"  at {s.format(g.universe)}, vendor {i} best replies:",
                ", ".join(g.universe.format_set(b) for b in best),
            )
    print()

    trace = br_dynamics(
        g, g.parse_profile(args.start), mode="discrete", max_steps=args.max_steps
    )
    print(f"round-robin dynamics from {args.start}:")
    for step in trace.steps:
        pays = "  ".join(format_rational(x) for x in step.payoffs)
        print(
            f"  vendor {step.vendor} moves to"
            f" {step.profile.format(g.universe):<14} payoffs {pays}"
        )
    if trace.status == "cycle":
        print(f"result: cycle of period {trace.period}")
    else:
        print(f"result: {trace.status}")


if __name__ == "__main__":
    main()
