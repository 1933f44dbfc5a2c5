"""Richardson ladders for the SP and explicit schemes in all three geometries.

The explicit scheme is refined with tau ~ h^2, so its order is measured in tau.
"""

import argparse
from pathlib import Path

from lagsym.convergence import LadderSpec, run_ladder
from lagsym.gas import GasModel
from lagsym.io import dumps_json

BUMP = dict(U=0.1, shape="bump", width=0.15)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--levels", type=int, default=4)
    ap.add_argument("--N0", type=int, default=32)
    ap.add_argument("--out", default="out/scripts")
    args = ap.parse_args()
    results = {}
    for n in (0, 1, 2):
        for label, spec in (
            ("sp", LadderSpec("sp", GasModel(n, 1.4), "isentropic-smooth", BUMP, N0=args.N0, r_origin=0.5 * n,
                              t_end=0.1, tau0=0.005, levels=args.levels)),
            ("explicit-invariant", LadderSpec("explicit-invariant", GasModel.special(n), "isentropic-smooth", BUMP,
                                              N0=args.N0, r_origin=0.5 * n, t_end=0.1, tau0=0.005,
                                              levels=args.levels, tau_scaling="parabolic")),
        ):
            res = run_ladder(spec)
            results[f"{label} n={n}"] = {"rows": res.rows, "orders": res.orders}
            print(f"{label:19s} n={n} orders {', '.join(f'{o:.3f}' for o in res.orders)}")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "convergence_ladders.json").write_text(dumps_json(results))


if __name__ == "__main__":
    main()
