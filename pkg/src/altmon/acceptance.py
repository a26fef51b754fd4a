"""The acceptance suite, shared by ``altmon selftest`` and the pytest wrapper.

Each criterion returns ``(name, passed, detail)``.
"""
from __future__ import annotations

import time

import numpy as np

from .classify import MonoidKind, member_fast, member_oracle
from .congruence import (
    build_pi,
    build_theta,
    check_tilde_laws,
    congruence_lattice_oracle,
    dihedral_counterexamples,
    enumerate_congruences_constructive,
    group_congruences,
    pori_counterexamples,
    rees,
    rotation_fix_counterexamples,
    tilde_map,
    _anchor_h,
)
from .engine import _candidates, cardinality_formula, closure_set, enumerate_kind, ideals
from .gens import (
    anchored_pair_sweep,
    exhaustive_rank_check,
    g1_identity_holds,
    known_generating_set,
    known_rank,
    product_set_lemmas,
    rank_lower_bound,
    realize,
)
from .green import green_classes, h_group_type, idempotent_h_class
from .pperm import PartialPerm

AOP, AOR, AO = MonoidKind.AOPN, MonoidKind.AORN, MonoidKind.AON

CARDINALITIES = {
    (AOP, 3): 22, (AOP, 4): 115, (AOP, 5): 581, (AOP, 6): 2680,
    (AOR, 4): 141, (AOR, 5): 936, (AOR, 6): 4873,
}

# n = 3, 4 derived by hand; n = 5 recorded from the brute-force oracle
CONGRUENCE_COUNTS = {(AOP, 3): 5, (AOP, 4): 14, (AOR, 4): 11, (AOP, 5): 10, (AOR, 5): 15}


def _result(name, failures, extra=""):
    detail = "; ".join(failures[:5]) if failures else extra
    return name, not failures, detail


# 1 ---------------------------------------------------------------------------------

def criterion_cardinalities():
    failures = []
    for (kind, n), want in CARDINALITIES.items():
        formula = cardinality_formula(kind, n)
        enumerated = len(enumerate_kind(kind, n))
        gens = [realize(s) for s in known_generating_set(kind, n)]
        closed = len(closure_set(n, gens))
        if not formula == enumerated == closed == want:
            failures.append(f"{kind.value}{n}: want {want}, formula {formula}, "
                            f"enum {enumerated}, closure {closed}")
    return _result("cardinalities", failures, f"{len(CARDINALITIES)} sizes agree three ways")


# 2 ---------------------------------------------------------------------------------

def random_low_rank(n: int, count: int, rng: np.random.Generator) -> list[PartialPerm]:
    """Random partial permutations of rank <= n-2; half with oriented image sequences."""
    ks = rng.integers(0, n - 1, count).tolist()
    doms = (np.argsort(rng.random((count, n)), axis=1) + 1).tolist()
    imgs = (np.argsort(rng.random((count, n)), axis=1) + 1).tolist()
    oriented = (rng.random(count) < 0.5).tolist()
    rots = rng.integers(0, n, count).tolist()
    revs = (rng.random(count) < 0.5).tolist()
    out = []
    for k, dom, img, o, r, rv in zip(ks, doms, imgs, oriented, rots, revs):
        seq = img[:k]
        if o and k:
            seq = sorted(seq)
            seq = seq[r % k:] + seq[:r % k]
            if rv:
                seq.reverse()
        t = [0] * (n + 1)
        for x, y in zip(sorted(dom[:k]), seq):
            t[x] = y
        out.append(PartialPerm._raw(tuple(t)))
    return out


def criterion_membership(samples: int = 100_000, seed: int = 2024):
    failures = []
    checked = 0
    for n in range(4, 9):
        for a in _candidates(MonoidKind.PORIN, n):
            if a.rank < n - 1:
                continue
            for kind in (AOP, AOR):
                checked += 1
                if member_fast(a, kind) != member_oracle(a, kind):
                    failures.append(f"{kind.value}{n} {a}")
    rng = np.random.default_rng(seed)
    sample = [a for n in range(4, 9) for a in random_low_rank(n, samples // 5, rng)]
    for a in sample:
        n = a.n
        for kind in (AOP, AOR):
            checked += 1
            if member_fast(a, kind) != member_oracle(a, kind):
                failures.append(f"{kind.value}{n} {a}")
    return _result("membership", failures, f"{checked} verdicts agree")


# 3 ---------------------------------------------------------------------------------

def _expected_top(kind, n) -> tuple[list[dict], str]:
    """Rank-(n-1) rows (size, n_L, n_R, h_size, group) and the unit group type."""
    if kind is AOP:
        units = f"cyclic({n})" if n % 2 else ("cyclic(2)" if n == 4 else f"cyclic({n // 2})")
        if n % 2:
            rows = [dict(size=n * n * (n - 1) // 2, n_L=n, n_R=n, h_size=(n - 1) // 2,
                         group=_gname("cyclic", (n - 1) // 2))]
        else:
            row = dict(size=n * n * (n - 1) // 4, n_L=n // 2, n_R=n // 2, h_size=n - 1,
                       group=f"cyclic({n - 1})")
            rows = [row, dict(row)]
        return rows, units
    m = n % 4
    units = {0: _gname("dihedral", n), 1: _gname("dihedral", 2 * n),
             2: _gname("dihedral", n), 3: f"cyclic({n})"}[m]
    if m == 2:
        row = dict(size=n * n * (n - 1) // 2, n_L=n // 2, n_R=n // 2, h_size=2 * n - 2,
                   group=_gname("dihedral", 2 * n - 2))
        return [row, dict(row)], units
    group = _gname("dihedral", n - 1) if n % 2 else f"cyclic({n - 1})"
    return [dict(size=n * n * (n - 1), n_L=n, n_R=n, h_size=n - 1, group=group)], units


def _gname(tag, order):
    if tag == "dihedral" and order == 4:
        return "klein"
    if order == 1:
        return "trivial"
    if tag == "dihedral" and order == 2:
        return "cyclic(2)"
    return f"{tag}({order})"


def _lower_group(kind, k):
    if kind is AOP:
        return _gname("cyclic", k)
    return _gname("dihedral", 2 * k) if k >= 3 else _gname("cyclic", k)


def criterion_green():
    failures = []
    for kind in (AOP, AOR):
        for n in range(4, 8):
            M = enumerate_kind(kind, n)
            G = green_classes(M)
            tag = f"{kind.value}{n}"
            names = {c: G.j_name(c) for c in range(len(G.j_classes))}
            split = (kind is AOP and n % 2 == 0) or (kind is AOR and n % 4 == 2)
            chain = [f"J{k}" for k in range(n - 1)]
            if split:
                want_edges = {(chain[i], chain[i + 1]) for i in range(n - 2)}
                want_edges |= {(chain[-1], f"J{n - 1}o"), (chain[-1], f"J{n - 1}e"),
                               (f"J{n - 1}o", f"J{n}"), (f"J{n - 1}e", f"J{n}")}
            else:
                full = chain + [f"J{n - 1}", f"J{n}"]
                want_edges = {(full[i], full[i + 1]) for i in range(n)}
            got_edges = {(names[a], names[b]) for a, b in G.hasse}
            if got_edges != want_edges:
                failures.append(f"{tag} Hasse {sorted(got_edges)}")
            rows, units = _expected_top(kind, n)
            top = [c for c in range(len(G.j_classes)) if G.j_rank[c] == n - 1]
            for c, want in zip(top, rows):
                st = G.stats(c)
                got = dict(size=st["size"], n_L=st["n_L"], n_R=st["n_R"], h_size=st["h_size"],
                           group=str(h_group_type(M, G, idempotent_h_class(M, G, c))))
                if got != want:
                    failures.append(f"{tag} {names[c]} {got} != {want}")
            if len(top) != len(rows):
                failures.append(f"{tag} has {len(top)} rank-{n - 1} classes")
            u = G.unit_class()
            got_u = str(h_group_type(M, G, idempotent_h_class(M, G, u)))
            if got_u != units:
                failures.append(f"{tag} units {got_u} != {units}")
            for c in range(len(G.j_classes)):
                k = G.j_rank[c]
                if 1 <= k <= n - 2:
                    got_g = str(h_group_type(M, G, idempotent_h_class(M, G, c)))
                    if got_g != _lower_group(kind, k):
                        failures.append(f"{tag} J{k} group {got_g}")
    return _result("green", failures, "8 posets, tables and group types match")


# 4 ---------------------------------------------------------------------------------

def criterion_congruences():
    failures = []
    counts = {}
    for (kind, n), want in CONGRUENCE_COUNTS.items():
        M = enumerate_kind(kind, n)
        cons = enumerate_congruences_constructive(M)
        oracle = {c.key for c in congruence_lattice_oracle(M)}
        counts[f"{kind.value}{n}"] = len(oracle)
        if set(cons) != oracle:
            failures.append(f"{kind.value}{n}: constructive {len(cons)} vs oracle {len(oracle)}")
        elif len(oracle) != want:
            failures.append(f"{kind.value}{n}: {len(oracle)} congruences, want {want}")
    for n in (4, 5):
        M = enumerate_kind(AO, n)
        oracle = {c.key for c in congruence_lattice_oracle(M)}
        reeses = {rees(M, I).key for I in ideals(M)}
        counts[f"ao{n}"] = len(oracle)
        if oracle != reeses or len(oracle) != n + 3:
            failures.append(f"ao{n}: {len(oracle)} congruences, {len(reeses)} Rees")
    return _result("congruences", failures, " ".join(f"{k}={v}" for k, v in counts.items()))


# 5 ---------------------------------------------------------------------------------

def criterion_tilde():
    failures = []
    checked = 0
    for kind in (AOP, AOR):
        for n in range(4, 8):
            M = enumerate_kind(kind, n)
            G = green_classes(M)
            for c in range(len(G.j_classes)):
                if G.j_rank[c] == 0:
                    continue
                tm = tilde_map(M, G, c)
                bad = {k: v for k, v in check_tilde_laws(M, G, tm).items() if v}
                checked += 1
                if bad:
                    failures.append(f"{kind.value}{n} {G.j_name(c)} {bad}")
                if G.j_rank[c] == n:
                    continue
                for rho in group_congruences(M, _anchor_h(M, G, c)):
                    th = build_theta(M, G, tm, rho)
                    pi = build_pi(M, G, tm, rho)
                    if not th.refines(pi) or not th.is_compatible(M):
                        failures.append(f"{kind.value}{n} theta not in pi at {G.j_name(c)} {rho.label}")
    return _result("tilde", failures, f"{checked} classes pass all laws; theta within pi")


# 6 ---------------------------------------------------------------------------------

def criterion_product_sets():
    failures = []
    for n in (4, 5, 6, 7):
        res = product_set_lemmas(n)
        if not all(v for k, v in res.items() if k in ("J", "Jo", "Je")):
            failures.append(f"n={n} {res}")
    return _result("product_sets", failures, "rank n-1 classes equal unit-sandwiched powers")


# 7 ---------------------------------------------------------------------------------

def criterion_rank():
    failures = []
    branches = [(AOP, 5), (AOP, 4), (AOP, 6), (AOP, 7), (AOR, 4), (AOR, 5), (AOR, 6), (AOR, 7)]
    for kind, n in branches:
        M = enumerate_kind(kind, n)
        gens = [realize(s) for s in known_generating_set(kind, n)]
        if closure_set(n, gens) != M.as_set():
            failures.append(f"{kind.value}{n}: tabulated set does not generate")
        lb = rank_lower_bound(kind, n, M)
        if lb != known_rank(kind, n) or len(gens) != lb:
            failures.append(f"{kind.value}{n}: bound {lb}, set size {len(gens)}")
    for n in range(3, 9):
        if not g1_identity_holds(n):
            failures.append(f"g1 identity fails at n={n}")
    for kind, n, r in ((AOP, 4, 2), (AOP, 5, 1), (AOR, 4, 2)):
        if not exhaustive_rank_check(kind, n, r):
            failures.append(f"{kind.value}{n}: some {r}-subset generates")
    if not anchored_pair_sweep(AOR, 7)["rank_exceeds_2"]:
        failures.append("aor7: <g, a> generates for some a")
    return _result("rank", failures, "generating sets, bounds and sweeps agree")


# 8 ---------------------------------------------------------------------------------

def criterion_micro_lemmas():
    failures = []
    for n in (4, 5, 6):
        bad = pori_counterexamples(n)
        if bad:
            failures.append(f"pori n={n}: {len(bad)}")
    for n in range(5, 9):
        bad = dihedral_counterexamples(n)
        if bad:
            failures.append(f"d2n n={n}: {len(bad)}")
    for n in range(2, 9):
        bad = rotation_fix_counterexamples(n)
        if bad:
            failures.append(f"gn n={n}: {bad[:3]}")
    return _result("micro_lemmas", failures, "zero counterexamples")


CRITERIA = [
    criterion_cardinalities,
    criterion_membership,
    criterion_green,
    criterion_congruences,
    criterion_tilde,
    criterion_product_sets,
    criterion_rank,
    criterion_micro_lemmas,
]


def run_all(stream=None, only=None, seed: int | None = None):
    results = []
    for i, fn in enumerate(CRITERIA, 1):
        if only and i not in only:
            continue
        t = time.perf_counter()
        if fn is criterion_membership and seed is not None:
            name, ok, detail = fn(seed=seed)
        else:
            name, ok, detail = fn()
        dt = time.perf_counter() - t
        line = f"[{i}] {name:<14} {'PASS' if ok else 'FAIL'} ({dt:.1f}s) {detail}"
        if stream is not None:
            print(line, file=stream, flush=True)
        results.append((name, ok, detail))
    return results
