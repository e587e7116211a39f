"""Degeneracy columns for the square and pow:-1/2 along eps = 2^-k, against closed forms.

Along L_eps = diag(eps, 1/eps) K rescaled to |L polar| = pi the homogeneous
value relative to eps = 1 is 4 / s^2 and the nonhomogeneous one is s / 2,
with s = eps^-1/2 + eps^1/2.  The script prints both columns and reports the
first k at which each crosses its factor.
"""

import argparse

from orliczkit.bodies import square
from orliczkit.functionals import probe_degeneracy
from orliczkit.orlicz_fn import parse_phi
from orliczkit.serialize import to_csv


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kmax", type=int, default=24)
    ap.add_argument("--phi", default="pow:-1/2")
    args = ap.parse_args()
    ks = list(range(args.kmax + 1))
    eps = [2.0**-k for k in ks]
    rep = probe_degeneracy(square(), parse_phi(args.phi), eps)
    hom0, non0 = rep.columns["hom"][0], rep.columns["nonhom"][0]
    hom_ratio = [v / hom0 for v in rep.columns["hom"]]
    non_ratio = [v / non0 for v in rep.columns["nonhom"]]
    s = [e**-0.5 + e**0.5 for e in eps]
    print(to_csv({"k": ks, "eps": eps, "hom_ratio": hom_ratio, "hom_closed_form": [4 / x**2 for x in s],
                  "nonhom_ratio": non_ratio, "nonhom_closed_form": [x / 2 for x in s]}), end="")
    first_hom = next((k for k, r in zip(ks, hom_ratio) if r < 1e-3), None)
    first_non = next((k for k, r in zip(ks, non_ratio) if r > 1e3), None)
    print(f"# hom below 1e-3 first at k = {first_hom}; nonhom above 1e3 first at k = {first_non}")


if __name__ == "__main__":
    main()
