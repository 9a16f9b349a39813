#!/usr/bin/env python3
"""Regenerate data/curves.csv and data/ap_table.csv with PARI/GP (cypari).

Every isogeny class of elliptic curves over Q with conductor <= BOUND is
found and checked against the number of rational weight-2 newforms of that
level, so the output is complete up to BOUND (modularity).  Candidates come
from a box of small models and its quadratic twists; classes still missing
after that are built from the period lattice of their newform.

Label convention: "<N><class><k>".  Classes at a level are ordered by their
sequence of a_p (p ascending, bad primes included) and lettered a, b, ...;
k = 1 is the Gamma_0(N)-optimal curve, the rest follow by isogeny degree from
curve 1 and then by a-invariants.

    pip install cypari numpy
    python3 tools/dataset/prepare_curves.py --bound 200 --out data
"""

import argparse
import itertools
import string
import sys

import numpy as np
from cypari import pari

PRIMES_200 = [int(p) for p in pari("primes([2,200])")]
AP_PRIMES = [int(p) for p in pari("primes([2,100])")]


def rational_newform_count(n):
    if n < 11:
        return 0
    return int(pari(f"#mfsplit(mfinit([{n},2],0),1)[2]"))


def minimal(ainvs):
    e = pari.ellinit(list(ainvs))
    m = e.ellminimalmodel()[0]
    return tuple(int(x) for x in m[:5])


def conductor(ainvs):
    return int(pari.ellglobalred(pari.ellinit(list(ainvs)))[0])


_GP_DEFS = [
    # enlarge the lattice B = [w1, w2] so that it contains P
    "xdq_latadd(B,P)=my(r=lindep([B[1],B[2],P]),z,H);if(r[3]<0,r=-r);z=r[3];"
    "if(z==0,error(\"degenerate\"));if(z==1,return(B));H=mathnf([z,0,-r[1];0,z,-r[2]]);"
    "[(H[1,1]*B[1]+H[2,1]*B[2])/z,(H[1,2]*B[1]+H[2,2]*B[2])/z]",
    # 2 pi i * integral of F from oo to a/N, for a prime to N
    "xdq_periods(mf,F,N)=my(fs=mfsymbol(mf,F),v=List());for(a=1,N,if(gcd(a,N)==1,"
    "my(p=2*Pi*I*simplify(mfsymboleval(fs,[oo,a/N])));if(abs(p)>1e-30,listput(v,p))));Vec(v)",
    "xdq_lattice(v)=my(B=[v[1]]);for(i=2,#v,if(abs(imag(v[i]/B[1]))>1e-20,B=concat(B,v[i]);break));"
    "for(i=1,#v,B=xdq_latadd(B,v[i]));B",
]


def rational_newforms(n, primes):
    """[(a_p signature, index into mfeigenbasis)] for the rational newforms of level n."""
    for d in _GP_DEFS:
        pari(d)
    pari(f"xdq_mf=mfinit([{n},2],0); xdq_L=mfeigenbasis(xdq_mf); xdq_K=mffields(xdq_mf)")
    out = []
    for i in range(1, int(pari("#xdq_L")) + 1):
        if int(pari(f"poldegree(xdq_K[{i}])")) != 1:
            continue
        coef = pari(f"mfcoefs(xdq_L[{i}],{max(primes)})")
        out.append((tuple(int(coef[p]) for p in primes), i))
    return out


def curve_from_periods(n, i):
    pari.set_real_precision(80)
    pari(f"xdq_B=xdq_lattice(xdq_periods(xdq_mf,xdq_L[{i}],{n}))")
    c4 = pari("12*elleisnum(xdq_B,4,1)")
    c6 = pari("216*elleisnum(xdq_B,6,1)")
    r4, r6 = int(c4.real().round()), int(c6.real().round())
    if abs(c4 - r4) > 1e-20 or abs(c6 - r6) > 1e-20:
        raise SystemExit(f"periods at level {n} do not give integral c4, c6")
    return r4, r6


def ap_signature(ainvs, primes):
    e = pari.ellinit(list(ainvs))
    return tuple(int(pari.ellap(e, p)) for p in primes)


def box_candidates(a4max, a6max, bound):
    """Minimal-looking models whose discriminant only involves primes <= bound."""
    a4 = np.arange(-a4max, a4max + 1, dtype=np.int64)
    a6 = np.arange(-a6max, a6max + 1, dtype=np.int64)
    A4, A6 = np.meshgrid(a4, a6, indexing="ij")
    A4 = A4.ravel()
    A6 = A6.ravel()
    out = []
    for a1, a2, a3 in itertools.product((0, 1), (-1, 0, 1), (0, 1)):
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * A4 + a1 * a3
        b6 = a3 * a3 + 4 * A6
        b8 = a1 * a1 * A6 + 4 * a2 * A6 - a1 * a3 * A4 + a2 * a3 * a3 - A4 * A4
        disc = -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
        rest = np.abs(disc)
        ok = rest != 0
        for p in PRIMES_200:
            for _ in range(64):
                div = (rest % p == 0) & ok
                if not div.any():
                    break
                rest = np.where(div, rest // p, rest)
        keep = ok & (rest == 1)
        for x, y in zip(A4[keep], A6[keep]):
            out.append((a1, a2, a3, int(x), int(y)))
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--bound", type=int, default=200)
    ap.add_argument("--a4", type=int, default=200)
    ap.add_argument("--a6", type=int, default=3000)
    ap.add_argument("--out", default="data")
    args = ap.parse_args()
    bound = args.bound
    pari.allocatemem(2 * 10**9)

    sig_primes = [int(p) for p in pari("primes(60)")]
    expected = {n: rational_newform_count(n) for n in range(1, bound + 1)}
    print("rational newforms:", sum(expected.values()), file=sys.stderr)

    classes = {}  # (N, ap signature) -> set of minimal models

    def add(ainvs):
        try:
            m = minimal(ainvs)
        except Exception:
            return False
        n = conductor(m)
        if n > bound:
            return False
        key = (n, ap_signature(m, sig_primes))
        fresh = key not in classes
        classes.setdefault(key, set()).add(m)
        return fresh

    for c in box_candidates(args.a4, args.a6, bound):
        add(c)
    print("after box search:", len(classes), file=sys.stderr)

    # Close under quadratic twists until nothing new appears.  An odd prime
    # p | D not dividing N puts p^2 into the twisted conductor, which bounds D.
    fund = [d for d in range(-8 * bound, 8 * bound + 1)
            if d not in (0, 1) and int(pari.isfundamental(d))]

    def twist_can_fit(n, d):
        cost = 1
        for p in (int(q) for q in pari.factor(abs(d))[0]):
            if p != 2 and n % p != 0:
                cost *= p * p
        return cost <= bound

    done = set()
    changed = True
    while changed:
        changed = False
        for key, models in list(classes.items()):
            if key in done:
                continue
            done.add(key)
            n = key[0]
            base = min(models)
            for d in fund:
                if not twist_can_fit(n, d):
                    continue
                tw = pari(f"elltwist(ellinit({list(base)}),{d})")
                if add(tuple(int(x) for x in tw[:5])):
                    changed = True
    print("after twists:", len(classes), file=sys.stderr)

    # Whatever is still missing comes from the newform itself: its period
    # lattice gives c4 and c6 of the optimal curve.
    found = {}
    for (n, _), _m in classes.items():
        found[n] = found.get(n, 0) + 1
    for n in sorted(expected):
        if expected[n] == found.get(n, 0):
            continue
        for coeffs in rational_newforms(n, sig_primes):
            if (n, coeffs[0]) in classes:
                continue
            c4, c6 = curve_from_periods(n, coeffs[1])
            if not add((0, 0, 0, -27 * c4, -54 * c6)):
                raise SystemExit(f"period lattice at {n} gave a known or wrong curve")
            print(f"  {n}: recovered from periods", file=sys.stderr)
    print("after periods:", len(classes), file=sys.stderr)

    found = {}
    for (n, _), _m in classes.items():
        found[n] = found.get(n, 0) + 1
    missing = {n: (expected[n], found.get(n, 0)) for n in expected if expected[n] != found.get(n, 0)}
    if missing:
        print("INCOMPLETE:", missing, file=sys.stderr)
        sys.exit(1)

    rows = []
    ap_rows = []
    by_level = {}
    for (n, _), models in classes.items():
        by_level.setdefault(n, []).append(min(models))

    for n in sorted(by_level):
        reps = sorted(by_level[n], key=lambda m: ap_signature(m, PRIMES_200[:40]))
        for ci, rep in enumerate(reps):
            letter = string.ascii_lowercase[ci]
            weil = pari(f"ellweilcurve(ellinit({list(rep)}))")
            curves = [minimal([int(x) for x in c[:5]]) for c in weil[0]]
            lattice = weil[1]
            opt = [i for i, v in enumerate(lattice) if int(v[0]) == 1 and int(v[1]) == 1]
            if len(opt) != 1:
                raise SystemExit(f"no unique optimal curve at {n}{letter}")
            opt = opt[0]
            # isogeny matrix, indices aligned with `curves`
            iso = pari.ellisomat(pari.ellinit(list(curves[opt])), 0, 1)
            iso_curves = [minimal(list(c)) for c in iso[0]]
            mat = iso[1]
            pos = {m: i for i, m in enumerate(iso_curves)}
            for c in curves:
                if c not in pos:
                    raise SystemExit(f"isogeny matrix mismatch at {n}{letter}: {c}")
            deg_from_opt = {c: int(mat[pos[curves[opt]]][pos[c]]) for c in curves}
            order = sorted(curves, key=lambda c: (c != curves[opt], deg_from_opt[c], c))
            labels = {c: f"{n}{letter}{k + 1}" for k, c in enumerate(order)}

            eopt = pari.ellinit(list(curves[opt]))
            moddeg = int(pari.ellmoddegree(eopt))
            arank = int(pari.ellanalyticrank(eopt)[0])
            rk = pari.ellrank(eopt)
            lo, hi = int(rk[0]), int(rk[1])
            if lo != hi or lo != arank:
                raise SystemExit(f"rank not certified at {n}{letter}: ellrank={lo}..{hi}, analytic={arank}")
            for c in order:
                degs = ";".join(f"{labels[o]}:{int(mat[pos[c]][pos[o]])}" for o in order)
                rows.append([labels[c], n, *c, lo, arank, moddeg * deg_from_opt[c],
                             f"{n}{letter}", degs])
            e = pari.ellinit(list(curves[opt]))
            ap_rows.append([f"{n}{letter}1"] + [int(pari.ellap(e, p)) for p in AP_PRIMES])

    with open(f"{args.out}/curves.csv", "w") as f:
        f.write(f"# completeness_bound: {bound}\n")
        f.write("# generated by tools/dataset/prepare_curves.py (PARI/GP "
                + ".".join(str(int(x)) for x in pari("version()")) + ")\n")
        f.write("# class_counts: " + " ".join(f"{n}:{expected[n]}" for n in sorted(expected) if expected[n]) + "\n")
        f.write("label,conductor,a1,a2,a3,a4,a6,rank,analytic_rank,modular_degree,isogeny_class,isogeny_degrees\n")
        for r in rows:
            f.write(",".join(str(x) for x in r) + "\n")
    with open(f"{args.out}/ap_table.csv", "w") as f:
        f.write("# a_p of the optimal curve of each class, computed with PARI ellap\n")
        f.write("label," + ",".join(f"p{p}" for p in AP_PRIMES) + "\n")
        for r in ap_rows:
            f.write(",".join(str(x) for x in r) + "\n")
    print(f"wrote {len(rows)} curves in {len(ap_rows)} classes", file=sys.stderr)


if __name__ == "__main__":
    main()
