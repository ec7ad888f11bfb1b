"""Exact enumeration of index-k subgroups and supporting group utilities.

Subgroups of index k in a concrete finite group G correspond to transitive
actions of G on k points with a marked basepoint: the subgroup is the
basepoint stabilizer.  The census therefore enumerates candidate images of a
small generating set in Sym(k), extends each candidate along breadth-first
generator words, validates the homomorphism condition phi(g s) = phi(g) phi(s)
for every element g and generator s, keeps candidates whose image moves the
basepoint through all k points, pulls back the stabilizer, and deduplicates
by canonical element-id lists.  This finds all subgroups of index exactly k,
not just one per conjugacy class.

An independent oracle (`subgroup_lattice_oracle`) computes the full subgroup
lattice of small groups by closing the set of cyclic subgroups under joins;
it exists purely to cross-check the census.

The normal core of every subgroup found at index k is reported and must have
index between k and k! (the coset action embeds G/core into Sym(k); the
weaker k^k bound is implied).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .ffield import factorize
from .matgroup import EnumerationBound, FiniteGroup

DEFAULT_CANDIDATE_BOUND = 10**6
DEFAULT_ORACLE_BOUND = 200


class CensusBoundExceeded(EnumerationBound):
    """The candidate space for a census cell exceeds the configured bound."""


class SubgroupHandle:
    """A subgroup of an enumerated parent group, as a sorted id tuple."""

    def __init__(self, parent: FiniteGroup, ids: Sequence[int], *,
                 normal: Optional[bool] = None,
                 core_ids: Optional[Sequence[int]] = None):
        self.parent = parent
        self.ids = tuple(sorted(ids))
        if len(parent) % len(self.ids):
            raise ValueError("subgroup order does not divide group order")
        self.index = len(parent) // len(self.ids)
        self._normal = normal
        self._core_ids = tuple(core_ids) if core_ids is not None else None

    @property
    def order(self) -> int:
        return len(self.ids)

    @property
    def normal(self) -> bool:
        if self._normal is None:
            self._normal = is_normal(self.parent, self.ids)
        return self._normal

    @property
    def core_ids(self) -> tuple[int, ...]:
        if self._core_ids is None:
            self._core_ids = normal_core(self.parent, self.ids).ids
        return self._core_ids

    @property
    def core_index(self) -> int:
        return len(self.parent) // len(self.core_ids)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SubgroupHandle) and self.ids == other.ids \
            and self.parent is other.parent

    def __hash__(self) -> int:
        return hash(self.ids)

    def __repr__(self) -> str:
        return f"<subgroup of index {self.index} in {self.parent!r}>"


def is_subgroup(group: FiniteGroup, ids: Iterable[int]) -> bool:
    idset = set(ids)
    if group.identity_id not in idset:
        return False
    return all(group.mult(a, group.inv(b)) in idset
               for a in idset for b in idset)


def is_normal(group: FiniteGroup, ids: Iterable[int],
              gens: Optional[Sequence[int]] = None) -> bool:
    """Normality via conjugation by a generating set of the parent."""
    idset = set(ids)
    if gens is None:
        gens = small_generating_set(group)
    return all(group.conjugate_id(g, h) in idset for g in gens for h in idset)


# ---------------------------------------------------------------------------
# generating sets


def small_generating_set(group: FiniteGroup, *, seed: int = 0,
                         sample_size: int = 24) -> list[int]:
    """A small generating set of element ids.

    Prefers the construction generators when the group carries verified ones;
    otherwise runs a seeded randomized search biased toward high-order
    elements, with a deterministic greedy-closure fallback that always
    succeeds.
    """
    n = len(group)
    if n == 1:
        return []
    full = tuple(range(n))
    hint = group.gens_hint
    if hint:
        live = [i for i in hint if i != group.identity_id]
        if len(live) <= 2:
            return live
        # try to prune a long verified hint down to a pair or triple
        ordered = sorted(live, key=lambda i: (-group.element_order(i), i))
        for pair in itertools.combinations(ordered, 2):
            if group.closure_ids(pair) == full:
                return list(pair)
        for triple in itertools.combinations(ordered, 3):
            if group.closure_ids(triple) == full:
                return list(triple)
        return live
    rng = random.Random(seed)
    pool = sorted(rng.sample(range(n), min(n, sample_size)))
    pool = [i for i in pool if i != group.identity_id] or [group.identity_id]
    ranked = sorted(pool, key=lambda i: (-group.element_order(i), i))
    for single in ranked[:8]:
        if group.closure_ids([single]) == full:
            return [single]
    for pair in itertools.combinations(ranked[:8], 2):
        if group.closure_ids(pair) == full:
            return list(pair)
    for triple in itertools.combinations(ranked[:6], 3):
        if group.closure_ids(triple) == full:
            return list(triple)
    # deterministic greedy growth over the canonical element order
    gens: list[int] = []
    have = {group.identity_id}
    while len(have) < n:
        nxt = next(i for i in range(n) if i not in have)
        gens.append(nxt)
        have = set(group.closure_ids(gens))
    return gens


# ---------------------------------------------------------------------------
# index-k census via transitive actions


def _bfs_program(group: FiniteGroup, gen_ids: Sequence[int]):
    """Breadth-first word structure of the group over the generators.

    Returns (bfs_ids, program): bfs_ids lists element ids in discovery order
    (identity first); program entries (is_check, gpos, spos, tpos) replay the
    multiplication table restricted to right products by generators, with
    tree edges assigning and non-tree edges checking.
    """
    pos_of: dict[int, int] = {group.identity_id: 0}
    bfs_ids = [group.identity_id]
    program: list[tuple[bool, int, int, int]] = []
    qi = 0
    while qi < len(bfs_ids):
        gid = bfs_ids[qi]
        for spos, sid in enumerate(gen_ids):
            tid = group.mult(gid, sid)
            tpos = pos_of.get(tid)
            if tpos is None:
                tpos = len(bfs_ids)
                pos_of[tid] = tpos
                bfs_ids.append(tid)
                program.append((False, qi, spos, tpos))
            else:
                program.append((True, qi, spos, tpos))
        qi += 1
    if len(bfs_ids) != len(group):
        raise ValueError("supplied generators do not generate the group")
    return bfs_ids, program


def index_k_subgroups(group: FiniteGroup, k: int, *,
                      gens: Optional[Sequence[int]] = None, seed: int = 0,
                      candidate_bound: int = DEFAULT_CANDIDATE_BOUND) -> list[SubgroupHandle]:
    """All subgroups of index exactly k, as canonical handles.

    Candidate generator images are prefiltered by order divisibility (the
    image of g must have order dividing ord(g)), which shrinks the raw
    (k!)^#gens space without losing any homomorphism; the bound applies to
    the filtered candidate count and exceeding it raises rather than
    truncating.
    """
    if k < 1:
        raise ValueError("index must be positive")
    n = len(group)
    if k == 1:
        return [SubgroupHandle(group, range(n), normal=True,
                               core_ids=range(n))]
    if n % k:
        return []
    if gens is None:
        gens = small_generating_set(group, seed=seed)
    if not gens:
        if n > 1:
            raise ValueError("empty generating set for a nontrivial group")
        return []  # trivial group, k > 1
    bfs_ids, program = _bfs_program(group, gens)
    perms = list(itertools.permutations(range(k)))
    perm_index = {p: i for i, p in enumerate(perms)}
    comp = [[perm_index[tuple(a[b[x]] for x in range(k))] for b in perms]
            for a in perms]
    perm_order = [_perm_order(p) for p in perms]
    allowed = []
    for sid in gens:
        o = group.element_order(sid)
        allowed.append([pi for pi in range(len(perms)) if o % perm_order[pi] == 0])
    total = 1
    for slot in allowed:
        total *= len(slot)
    if total > candidate_bound:
        raise CensusBoundExceeded(
            f"census cell needs {total} candidates, bound is {candidate_bound}")
    found: dict[tuple[int, ...], tuple[int, ...]] = {}
    npos = len(bfs_ids)
    for cand in itertools.product(*allowed):
        phi = [0] * npos
        ok = True
        for is_check, gpos, spos, tpos in program:
            v = comp[phi[gpos]][cand[spos]]
            if is_check:
                if phi[tpos] != v:
                    ok = False
                    break
            else:
                phi[tpos] = v
        if not ok:
            continue
        orbit = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for c in cand:
                y = perms[c][x]
                if y not in orbit:
                    orbit.add(y)
                    stack.append(y)
        if len(orbit) != k:
            continue
        stab = tuple(sorted(bfs_ids[pos] for pos in range(npos)
                            if perms[phi[pos]][0] == 0))
        if stab not in found:
            core = tuple(sorted(bfs_ids[pos] for pos in range(npos)
                                if phi[pos] == 0))
            found[stab] = core
    handles = [SubgroupHandle(group, ids, core_ids=core)
               for ids, core in sorted(found.items())]
    for h in handles:
        if not (k <= h.core_index <= _factorial(k)):
            raise AssertionError(
                f"core index {h.core_index} outside [k, k!] for k={k}")
    return handles


def _perm_order(p: tuple[int, ...]) -> int:
    seen = [False] * len(p)
    order = 1
    for i in range(len(p)):
        if not seen[i]:
            length, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = p[j]
                length += 1
            order = order * length // _gcd(order, length)
    return order


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _factorial(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


# ---------------------------------------------------------------------------
# independent oracle: full subgroup lattice by join closure


def subgroup_lattice_oracle(group: FiniteGroup,
                            bound: int = DEFAULT_ORACLE_BOUND) -> list[tuple[int, ...]]:
    """Every subgroup of a small group, as sorted id tuples.

    Seeds with all cyclic subgroups and repeatedly joins pairs until no new
    subgroup appears.  Every subgroup is the join of its cyclic subgroups, so
    the fixpoint is the complete lattice.
    """
    n = len(group)
    if n > bound:
        raise EnumerationBound(f"oracle limited to order {bound}, got {n}")
    gens_of: dict[tuple[int, ...], tuple[int, ...]] = {}
    queue: list[tuple[int, ...]] = []
    for i in range(n):
        sub = group.closure_ids([i])
        if sub not in gens_of:
            gens_of[sub] = (i,)
            queue.append(sub)
    qi = 0
    while qi < len(queue):
        a = queue[qi]
        qi += 1
        for b in list(gens_of):
            join = group.closure_ids(gens_of[a] + gens_of[b])
            if join not in gens_of:
                gens_of[join] = tuple(dict.fromkeys(gens_of[a] + gens_of[b]))
                queue.append(join)
    return sorted(gens_of)


# ---------------------------------------------------------------------------
# cores, commutators, centers, abelian structure


def normal_core(group: FiniteGroup, ids: Sequence[int]) -> SubgroupHandle:
    """Intersection of all conjugates: the kernel of the coset action."""
    idset = set(ids)
    if is_normal(group, idset):
        return SubgroupHandle(group, ids, normal=True, core_ids=ids)
    n = len(group)
    coset_of = [-1] * n
    reps: list[int] = []
    for i in range(n):
        if coset_of[i] < 0:
            c = len(reps)
            reps.append(i)
            for h in idset:
                coset_of[group.mult(i, h)] = c
    core = [g for g in range(n)
            if all(coset_of[group.mult(g, r)] == x for x, r in enumerate(reps))]
    return SubgroupHandle(group, core, normal=True, core_ids=core)


def derived_subgroup(group: FiniteGroup) -> tuple[int, ...]:
    """The commutator subgroup, via the normal closure of generator commutators."""
    gens = small_generating_set(group)
    seeds = set()
    for a in gens:
        for b in gens:
            c = group.mult(group.mult(group.inv(a), group.inv(b)),
                           group.mult(a, b))
            seeds.add(c)
    seeds.discard(group.identity_id)
    current = list(seeds)
    sub = set(group.closure_ids(current))
    while True:
        new = [group.conjugate_id(g, h)
               for g in gens for h in current
               if group.conjugate_id(g, h) not in sub]
        if not new:
            return tuple(sorted(sub))
        current.extend(dict.fromkeys(new))
        sub = set(group.closure_ids(current))


def subgroup_as_group(group: FiniteGroup, ids: Sequence[int],
                      label: str = "") -> FiniteGroup:
    """The subgroup on the given ids as a standalone FiniteGroup."""
    elems = [group.elements[i] for i in ids]
    return FiniteGroup(elems, group.op, group.identity, inv=group._inv_fn,
                       label=label or f"subgroup of {group.label}")


def quotient_group(group: FiniteGroup, normal_ids: Sequence[int], *,
                   check: bool = True) -> tuple[FiniteGroup, list[int]]:
    """Quotient by a normal subgroup, on minimal canonical coset reps.

    Returns (quotient, projection) where projection[i] is the quotient id of
    parent element i.
    """
    nids = sorted(set(normal_ids))
    if check:
        if not is_subgroup(group, nids):
            raise ValueError("ids do not form a subgroup")
        if not is_normal(group, nids):
            raise ValueError("subgroup is not normal")
    n = len(group)
    rep_of = [-1] * n
    for i in range(n):
        if rep_of[i] < 0:
            for h in nids:
                rep_of[group.mult(i, h)] = i
    reps = sorted({rep_of[i] for i in range(n)})
    rep_elems = [group.elements[r] for r in reps]

    def qop(a, b):
        return group.elements[rep_of[group.mult(group.index[a], group.index[b])]]

    def qinv(a):
        return group.elements[rep_of[group.inv(group.index[a])]]

    quotient = FiniteGroup(rep_elems, qop,
                           group.elements[rep_of[group.identity_id]], inv=qinv,
                           label=f"{group.label}/N{len(nids)}")
    projection = [quotient.index[group.elements[rep_of[i]]] for i in range(n)]
    return quotient, projection


def center(group: FiniteGroup) -> tuple[int, ...]:
    """Ids of elements commuting with a generating set (hence with all)."""
    gens = small_generating_set(group)
    return tuple(i for i in range(len(group))
                 if all(group.mult(i, g) == group.mult(g, i) for g in gens))


def abelianization_invariants(group: FiniteGroup) -> list[int]:
    """Invariant factors of G/[G, G], ascending with divisibility."""
    derived = derived_subgroup(group)
    quotient, _ = quotient_group(group, derived, check=False)
    return invariant_factors_abelian(quotient)


def invariant_factors_abelian(group: FiniteGroup) -> list[int]:
    """Invariant factors [d_1, ..., d_r], d_1 | d_2 | ... | d_r, of an
    abelian group, from the solution counts of x^(p^i) = 1.

    In a direct sum of cyclic p-groups with exponents e_1, e_2, ... the count
    of solutions of x^(p^i) = 1 is p to the power sum(min(i, e_j)), so the
    increments of its p-logarithm are the conjugate partition of the e_j.
    """
    n = len(group)
    if n == 1:
        return []
    orders = [group.element_order(i) for i in range(n)]
    primary: dict[int, list[int]] = {}
    for p in factorize(n):
        sylow = _p_sylow_size(orders, p)
        logs = [0]
        i = 1
        while p ** logs[-1] < sylow:
            c = sum(1 for o in orders if p**i % o == 0)
            logs.append(_ilog(c, p))
            i += 1
        profile = [logs[j] - logs[j - 1] for j in range(1, len(logs))]
        parts = [sum(1 for e in profile if e > j)
                 for j in range(profile[0] if profile else 0)]
        primary[p] = sorted(parts, reverse=True)
    width = max(len(v) for v in primary.values())
    factors = []
    for t in range(width):
        d = 1
        for p, parts in primary.items():
            if t < len(parts):
                d *= p ** parts[t]
        factors.append(d)
    return sorted(factors)


def _p_part(o: int, p: int) -> int:
    r = 1
    while o % p == 0:
        o //= p
        r *= p
    return r


def _p_sylow_size(orders: list[int], p: int) -> int:
    return sum(1 for o in orders if _p_part(o, p) == o)


def _ilog(x: int, p: int) -> int:
    e = 0
    while x > 1:
        x //= p
        e += 1
    return e


def index_formula_check(group: FiniteGroup, h_ids: Sequence[int],
                        n_ids: Sequence[int]) -> tuple[int, int, bool]:
    """Evaluate [G:H] against [G/N : HN/N] * [N : H meet N] for normal N."""
    hset, nset = set(h_ids), set(n_ids)
    if not is_normal(group, nset):
        raise ValueError("N must be normal")
    lhs = len(group) // len(hset)
    hn = {group.mult(h, n) for h in hset for n in nset}
    rhs = (len(group) // len(hn)) * (len(nset) // len(hset & nset))
    return lhs, rhs, lhs == rhs


def minimal_proper_index(group: FiniteGroup, k_max: int, *, seed: int = 0,
                         candidate_bound: int = DEFAULT_CANDIDATE_BOUND) -> Optional[int]:
    """Smallest k in [2, k_max] with a nonempty census, else None."""
    gens = small_generating_set(group, seed=seed)
    for k in range(2, k_max + 1):
        if index_k_subgroups(group, k, gens=gens, seed=seed,
                             candidate_bound=candidate_bound):
            return k
    return None


def conjugacy_classes_of_subgroups(parent: FiniteGroup,
                                   handles: Sequence[SubgroupHandle]
                                   ) -> list[list[SubgroupHandle]]:
    """Group subgroup handles into conjugacy classes.

    Orbits are grown by conjugating with a generating set; classes come out
    sorted by their smallest member, members sorted within each class.
    """
    gens = small_generating_set(parent)
    by_ids = {h.ids: h for h in handles}
    seen: set[tuple[int, ...]] = set()
    classes = []
    for ids in sorted(by_ids):
        if ids in seen:
            continue
        orbit = {ids}
        queue = [ids]
        while queue:
            cur = queue.pop()
            for g in gens:
                conj = tuple(sorted(parent.conjugate_id(g, x) for x in cur))
                if conj not in orbit:
                    orbit.add(conj)
                    queue.append(conj)
        members = sorted(orbit & set(by_ids))
        if orbit - set(by_ids):
            raise AssertionError("conjugate of a census subgroup is missing "
                                 "from the census")
        seen.update(members)
        classes.append([by_ids[m] for m in members])
    return classes


@dataclass
class CensusReport:
    """One census cell: the counts, and optionally the subgroups themselves."""

    spec: str
    q: int
    n: int
    k: int
    order: int
    count: int
    subgroups: Optional[list[SubgroupHandle]] = None
    reached: list[dict] = field(default_factory=list)
    classes: Optional[list[list[SubgroupHandle]]] = None

    def as_dict(self) -> dict:
        out = {"spec": self.spec, "q": self.q, "n": self.n, "k": self.k,
               "order": self.order, "count": self.count}
        if self.subgroups is not None:
            if self.count != len(self.subgroups):
                raise ValueError("materialized list disagrees with the count")
            out["subgroups"] = [{"order": h.order, "normal": h.normal,
                                 "core_index": h.core_index}
                                for h in self.subgroups]
        if self.reached:
            out["reached"] = self.reached
        if self.classes is not None:
            out["conjugacy_classes"] = [len(c) for c in self.classes]
        return out


def run_census(group: FiniteGroup, k: int, *, seed: int = 0,
               candidate_bound: int = DEFAULT_CANDIDATE_BOUND,
               list_bound: int = 4096) -> CensusReport:
    """Census one cell and package it as a report record."""
    meta = group.meta
    spec = meta.get("spec")
    subs = index_k_subgroups(group, k, seed=seed, candidate_bound=candidate_bound)
    return CensusReport(spec=spec.tag if spec else group.label,
                        q=meta.get("q", 0), n=meta.get("n", 0), k=k,
                        order=len(group), count=len(subs),
                        subgroups=subs if len(group) <= list_bound else None)


def reached_by(parent: FiniteGroup, h_ids: Sequence[int], isogenies: Sequence,
               n: int, ambient) -> dict[str, Optional[bool]]:
    """For each catalog isogeny into the parent's spec: does its induced
    isogeny reach the subgroup?  False when the image is not contained in H;
    None when the isogeny does not apply to this parent."""
    from . import homs  # local import: census <-> homs would otherwise cycle

    spec = parent.meta.get("spec")
    flags: dict[str, Optional[bool]] = {}
    hset = set(h_ids)
    for iso in isogenies:
        if spec is None or not iso.applies_to(spec):
            flags[iso.name] = None
            continue
        image = homs.image_ids(iso, n, ambient, codomain_points=parent)
        if not set(image).issubset(hset):
            flags[iso.name] = False
            continue
        _, ok = homs.induced_isogeny_reaches(iso, h_ids, n, ambient,
                                             codomain_points=parent)
        flags[iso.name] = ok
    return flags
