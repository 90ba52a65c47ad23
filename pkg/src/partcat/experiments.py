"""Exhaustive checks that produce reports: counts, the realization functor,
independence ranks, the outline functor, Gram equivalence and classical samples."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from . import classical
from . import fattening as fat
from . import partition as pc
from .echelon import span_dimension
from .operators import adjoint_op, compose_ops, gram_matrix, realize, tensor_ops


@dataclass
class CheckReport:
    kind: str
    params: dict
    data: dict = field(default_factory=dict)
    mismatches: list[str] = field(default_factory=list)

    @property
    def status(self) -> str:
        return "mismatch" if self.mismatches else "pass"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "params": dict(sorted(self.params.items())),
            "data": self.data,
            "mismatches": list(self.mismatches),
            "status": self.status,
        }


def catalan(k: int) -> int:
    return comb(2 * k, k) // (k + 1)


def signatures(max_points: int, min_points: int = 0):
    for total in range(min_points, max_points + 1):
        for k in range(total + 1):
            yield k, total - k


def enumeration_counts(max_k: int = 8) -> CheckReport:
    """|NCPair(0, 2k)| and |NCPart(0, k)| against the Catalan numbers."""
    rep = CheckReport("enumerate", {"max_k": max_k})
    pairs = [len(pc.enumerate_nc_pairings(0, 2 * k)) for k in range(1, max_k + 1)]
    parts = [len(pc.enumerate_nc_partitions(0, k)) for k in range(1, max_k + 1)]
    expected = [catalan(k) for k in range(1, max_k + 1)]
    rep.data = {"ncpair_0_2k": pairs, "ncpart_0_k": parts, "catalan": expected}
    if pairs != expected:
        rep.mismatches.append(f"pairings {pairs} != {expected}")
    if parts != expected:
        rep.mismatches.append(f"partitions {parts} != {expected}")
    return rep


def homomorphism_check(N: int, max_points: int = 6) -> CheckReport:
    """Realization respects composition (with N^loops), tensor products and involution.

    Compositions range over every composable pair whose operands each have at
    most ``max_points`` points; tensor products over pairs whose product has
    at most ``max_points`` points.
    """
    rep = CheckReport("homomorphism", {"N": N, "max_points": max_points})
    fam = {s: pc.enumerate_nc_partitions(*s) for s in signatures(max_points)}
    n_comp = n_tens = n_adj = 0
    for (k, m), ps in fam.items():
        for (m2, l), qs in fam.items():
            if m2 != m:
                continue
            for p in ps:
                Tp = realize(p, N)
                for q in qs:
                    r, loops = pc.compose(q, p)
                    n_comp += 1
                    if compose_ops(realize(q, N), Tp) != realize(r, N).scale(N**loops):
                        rep.mismatches.append(f"compose {q} after {p}")
    for (k1, l1), ps in fam.items():
        for (k2, l2), qs in fam.items():
            if k1 + l1 + k2 + l2 > max_points:
                continue
            for p in ps:
                for q in qs:
                    n_tens += 1
                    if tensor_ops(realize(p, N), realize(q, N)) != realize(pc.tensor(p, q), N):
                        rep.mismatches.append(f"tensor {p} (x) {q}")
    for ps in fam.values():
        for p in ps:
            n_adj += 1
            if adjoint_op(realize(p, N)) != realize(pc.involute(p), N):
                rep.mismatches.append(f"involution {p}")
    rep.data = {"compositions": n_comp, "tensors": n_tens, "involutions": n_adj}
    return rep


def independence_check(max_pair_k: int = 4, pair_dims=(2, 3, 4), part_N: int = 4, max_part_k: int = 3) -> CheckReport:
    """Ranks of realized NCPair_N(0, 2k) and NCPart_N(0, k) against Catalan(k)."""
    rep = CheckReport("independence", {"max_pair_k": max_pair_k, "pair_dims": list(pair_dims),
                                       "part_N": part_N, "max_part_k": max_part_k})
    pair_ranks = {}
    for N in pair_dims:
        for k in range(1, max_pair_k + 1):
            r = span_dimension(realize(p, N) for p in pc.enumerate_nc_pairings(0, 2 * k))
            pair_ranks[f"N={N},k={k}"] = r
            if r != catalan(k):
                rep.mismatches.append(f"NCPair_{N}(0,{2 * k}) rank {r} != {catalan(k)}")
    part_ranks = {}
    for k in range(1, max_part_k + 1):
        r = span_dimension(realize(p, part_N) for p in pc.enumerate_nc_partitions(0, k))
        part_ranks[f"N={part_N},k={k}"] = r
        if r != catalan(k):
            rep.mismatches.append(f"NCPart_{part_N}(0,{k}) rank {r} != {catalan(k)}")
    rep.data = {"ncpair_ranks": pair_ranks, "ncpart_ranks": part_ranks}
    return rep


def partition_ranks(N: int, max_points: int) -> dict[str, int]:
    """Ranks of realized noncrossing partitions per signature: recorded, not asserted."""
    return {f"{k},{l}": span_dimension(realize(p, N) for p in pc.enumerate_nc_partitions(k, l))
            for k, l in signatures(max_points, 1)}


def fattening_check(max_points: int = 5, roundtrip_points: int = 8) -> CheckReport:
    """Outline bijection and functoriality of the weighted outline map."""
    rep = CheckReport("fatten-verify", {"max_points": max_points, "roundtrip_points": roundtrip_points})
    n_round = 0
    for k, l in signatures(roundtrip_points):
        images = set()
        for p in pc.enumerate_nc_partitions(k, l):
            n_round += 1
            w = fat.fatten(p).pairing
            images.add(w)
            if fat.unfatten(w) != p:
                rep.mismatches.append(f"round trip {p}")
        # bijective onto the noncrossing pairings of the doubled rows
        if images != set(pc.enumerate_nc_pairings(2 * k, 2 * l)):
            rep.mismatches.append(f"image of NCPart({k},{l}) is not NCPair({2 * k},{2 * l})")
    fam = {s: pc.enumerate_nc_partitions(*s) for s in signatures(max_points)}
    n_comp = n_tens = n_inv = 0
    for (k, m), ps in fam.items():
        for (m2, l), qs in fam.items():
            if m2 != m:
                continue
            for p in ps:
                for q in qs:
                    n_comp += 1
                    if not fat.check_compose(q, p):
                        rep.mismatches.append(f"compose {q} after {p}")
    for (k1, l1), ps in fam.items():
        for (k2, l2), qs in fam.items():
            if k1 + l1 + k2 + l2 > max_points:
                continue
            for p in ps:
                for q in qs:
                    n_tens += 1
                    if not fat.functor_check_tensor(p, q):
                        rep.mismatches.append(f"tensor {p} (x) {q}")
    for ps in fam.values():
        for p in ps:
            n_inv += 1
            if not fat.functor_check_involution(p):
                rep.mismatches.append(f"involution {p}")
    cases = contraction_cases(max_points)
    missing = sorted({1, 2, 3, 4} - {int(c) for c in cases})
    if missing:
        rep.mismatches.append(f"contraction cases not exercised: {missing}")
    rep.data = {"roundtrips": n_round, "compositions": n_comp, "tensors": n_tens,
                "involutions": n_inv, "contraction_cases": cases}
    return rep


def contraction_cases(max_points: int = 5) -> dict[str, dict]:
    """Per contraction case: how many instances, failures, and the exponent shifts seen.

    The shift is e(p) - e(contracted p), where e is the half-exponent
    sum_b (2 - |b|); loops are counted for both the partition and its outline.
    """
    out: dict[str, dict] = {}
    for k, l in signatures(max_points):
        if l < 2:
            continue
        for p in pc.enumerate_nc_partitions(k, l):
            for pos in range(1, l):
                case = fat.contraction_case(p, pos)
                chk = fat.check_compose(fat.cap(l, pos), p)
                entry = out.setdefault(str(case), {"count": 0, "failures": 0, "shifts": set(), "loops": set()})
                entry["count"] += 1
                entry["failures"] += not chk.ok
                entry["shifts"].add(fat.half_exponent(p) - fat.half_exponent(chk.partition))
                entry["loops"].add((chk.loops, chk.pairing_loops))
    return {c: {"count": e["count"], "failures": e["failures"], "shifts": sorted(e["shifts"]),
                "loops": [list(x) for x in sorted(e["loops"])]} for c, e in sorted(out.items())}


def gram_equivalence_check(n: int, max_points: int = 5) -> CheckReport:
    """Gram of NC partitions at n^2 against Gram of weighted outlines at n."""
    rep = CheckReport("gram", {"n": n, "max_points": max_points})
    sizes = {}
    for k, l in signatures(max_points):
        parts = pc.enumerate_nc_partitions(k, l)
        lhs = gram_matrix(parts, n * n, method="join")
        rhs = fat.scaled_gram(parts, n, method="entrywise")
        sizes[f"{k},{l}"] = len(parts)
        if lhs != rhs:
            rep.mismatches.append(f"signature ({k},{l})")
    rep.data = {"partitions": sizes}
    return rep


def gram_join_check(N: int, max_points: int = 4) -> CheckReport:
    """The join formula for <T_p, T_q> against entrywise inner products."""
    rep = CheckReport("gram-join", {"N": N, "max_points": max_points})
    for k, l in signatures(max_points):
        parts = pc.enumerate_nc_partitions(k, l)
        if gram_matrix(parts, N, "join") != gram_matrix(parts, N, "entrywise"):
            rep.mismatches.append(f"signature ({k},{l})")
    return rep


def classical_check(n: int = 3, samples: int = 100, seed: int = 7, tol: float = 1e-9,
                    identity_dims=(2, 3)) -> CheckReport:
    """Sampled B = A (x) A against the three relation families, plus the crossing identity."""
    rep = CheckReport("classical-check", {"n": n, "samples": samples, "seed": seed, "tol": tol})
    worst = {"symmetry": 0.0, "trace": 0.0, "product": 0.0}
    for i, A in enumerate(classical.sample_orthogonal(n, samples, seed)):
        r = classical.po_relation_residuals(A, tol)
        for key in worst:
            worst[key] = max(worst[key], getattr(r, key))
        if not r.ok:
            rep.mismatches.append(f"sample {i}")
    ident = {str(N): classical.icrosspart_identity_holds(N) for N in identity_dims}
    rep.mismatches += [f"crossing identity at N={N}" for N, ok in ident.items() if not ok]
    rep.data = {"max_residuals": {k: f"{v:.3e}" for k, v in sorted(worst.items())}, "crossing_identity": ident}
    return rep


def scalar_table(p: pc.SetPartition, n: int) -> dict:
    f = fat.fatten(p)
    value, has_sqrt = f.scalar.evaluate(n)
    return {"partition": str(p), "outline": str(f.pairing), "scalar": str(f.scalar),
            "value": str(value) + (f"*sqrt({n})" if has_sqrt else "")}
