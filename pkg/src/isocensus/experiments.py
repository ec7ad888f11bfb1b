"""Batch experiments reproducing the theory at desk scale.

Each experiment walks a grid of cells and emits one record per cell plus a
summary; every record carries an explicit pass/fail/skipped status, cells
that would exceed a size bound are labeled skipped rather than silently
dropped, and any exception inside a cell marks it failed while the harness
continues.  Reports are deterministic: fixed iteration order, integer-only
payloads, seeded randomness.

    E1  image-index identity  [G(F_{q^n}) : image] = #rational kernel
    E2  cokernel invariants match ker/lang(ker); transversal map checked as
        a surjective homomorphism on small cells
    E3  arithmetic-progression detector for index-3 subgroups of Gm over F_2
    E4  vanishing censuses for SL_2 over small prime powers
    E5  norm torus: split/non-split index-2 counts and which subgroups the
        double cover reaches
    E6  BN-pair and closed order formulas against enumeration
    E7  characteristic scan: SL_2(F_p) has no small-index subgroups
    E8  additive counterexample: hyperplane counts in G_a

Ambient fields are planned per cell by integer arithmetic: level-n points
need degree e*n, geometric kernels degree e*s_ker, and transversal preimages
degree e*n*s_section; the kernel side of E2 lives in its own small field on
cells too large for the transversal check.
"""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import asdict, dataclass, field, fields
from math import gcd
from typing import Optional

from . import census, homs, orderform
from .ffield import AmbientField, is_prime, make_field
from .matgroup import (FiniteGroup, GaSpec, GmSpec, GroupSpec,
                       NormTorusSpec, SLSpec, rational_points)

EXPERIMENT_IDS = ("E1", "E2", "E3", "E4", "E5", "E6", "E7", "E8")


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def primes_in(lo: int, hi: int) -> list[int]:
    return [p for p in range(max(lo, 2), hi + 1) if is_prime(p)]


@dataclass
class ExperimentConfig:
    """One config drives every experiment; defaults match the acceptance grid."""

    seed: int = 0
    out_dir: str = "reports"
    fmt: str = "json"  # json | csv | both

    e12_qs: tuple[int, ...] = (2, 3, 5, 7)
    e12_n_max: int = 6
    e12_ks: tuple[int, ...] = (2, 3, 4, 5)
    e12_order_bound: int = 100_000
    mu_order_bound: int = 512

    e3_q: int = 2
    e3_k: int = 3
    e3_n_max: int = 12

    e4_qs: tuple[tuple[int, int], ...] = ((2, 1), (3, 1), (2, 2), (5, 1),
                                          (7, 1), (2, 3), (3, 2))
    e4_ks: tuple[int, ...] = (2, 3, 4)

    e5_p_max: int = 100

    e6_qs: tuple[int, ...] = (2, 3, 4, 5, 7, 9)
    e6_ratio_n_max: int = 6

    e7_p_min: int = 5
    e7_p_max: int = 31
    e7_k_max: int = 4

    e8_ps: tuple[int, ...] = (2, 3)
    e8_n_max: int = 4

    census_order_bound: int = 100_000
    candidate_bound: int = 10**6
    oracle_bound: int = 200
    s_search: int = 32

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, list):
                setattr(self, f.name,
                        tuple(tuple(x) if isinstance(x, list) else x for x in v))

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        data = json.loads(text)
        known = {f.name for f in fields(cls)}
        bad = set(data) - known
        if bad:
            raise ValueError(f"unknown config keys: {sorted(bad)}")
        return cls(**data)


def _cell(experiment: str, **kw) -> dict:
    base = {"experiment": experiment, "spec": None, "isogeny": None, "q": None,
            "n": None, "k": None, "order": None, "count": None, "flags": {},
            "status": "pass", "reason": None}
    base.update(kw)
    return base


class Runner:
    """Executes experiments against shared field/group caches."""

    def __init__(self, config: Optional[ExperimentConfig] = None):
        self.config = config or ExperimentConfig()
        self._fields: dict[tuple[int, int], AmbientField] = {}
        self._groups: dict[tuple, FiniteGroup] = {}

    # -- caches ---------------------------------------------------------------

    def field(self, p: int, degree: int) -> AmbientField:
        key = (p, degree)
        if key not in self._fields:
            self._fields[key] = make_field(p, degree)
        return self._fields[key]

    def group(self, spec: GroupSpec, n: int, degree: int) -> FiniteGroup:
        key = (type(spec).__name__, spec.m, spec.p, spec.e, n, degree)
        if key not in self._groups:
            amb = self.field(spec.p, degree)
            self._groups[key] = rational_points(
                spec, n, amb, order_bound=self.config.census_order_bound * 2)
        return self._groups[key]

    # -- shared cell helpers ----------------------------------------------------

    def _e12_cells(self, experiment: str) -> list[dict]:
        """Common grid for E1/E2: catalog isogenies x q x n."""
        cfg = self.config
        cells = []
        for q in cfg.e12_qs:
            for family in ("Gm", "NormTorus"):
                for k in cfg.e12_ks:
                    for n in range(1, cfg.e12_n_max + 1):
                        cells.append((family, f"pow:{k}", q, n, k))
            for n in range(1, cfg.e12_n_max + 1):
                cells.append(("NormTorus", "normcover", q, n, None))
        out = []
        for family, iso_name, q, n, k in cells:
            cell = _cell(experiment, spec=family, isogeny=iso_name, q=q, n=n, k=k)
            if k is not None and gcd(k, q) != 1:
                cell.update(status="skipped", reason="k shares a factor with q")
                out.append(cell)
                continue
            if iso_name == "normcover" and q % 3 == 0:
                cell.update(status="skipped",
                            reason="cover is disconnected in characteristic 3")
                out.append(cell)
                continue
            order = orderform.closed_order(family, q, n)
            cell["order"] = order
            if order > self.config.e12_order_bound:
                cell.update(status="skipped", reason="group order exceeds bound")
                out.append(cell)
                continue
            try:
                self._run_e12_cell(experiment, cell, family, iso_name, q, n, k)
            except Exception as exc:  # cell failures must not stop the grid
                cell.update(status="fail", reason=f"{type(exc).__name__}: {exc}")
            out.append(cell)
        return out

    def _make_isogeny(self, family: str, iso_name: str, q: int, k: Optional[int]):
        p, e = _prime_power(q)
        if iso_name == "normcover":
            return homs.NormCoverIsogeny(p, e)
        spec = GmSpec(p, e) if family == "Gm" else NormTorusSpec(p, e)
        return homs.power_isogeny(spec, k)

    def _run_e12_cell(self, experiment: str, cell: dict, family: str,
                      iso_name: str, q: int, n: int, k: Optional[int]) -> None:
        cfg = self.config
        p, e = _prime_power(q)
        iso = self._make_isogeny(family, iso_name, q, k)
        with_mu = experiment == "E2" and cell["order"] <= cfg.mu_order_bound
        if experiment == "E1" or not with_mu:
            level_units = n
        else:
            level_units = _lcm(n * iso.section_degree(n, cfg.s_search),
                               iso.kernel_field_degree())
        degree = e * level_units
        amb = self.field(p, degree)
        codomain = self.group(iso.codomain_spec, n, degree)
        domain = codomain if iso.domain_spec is iso.codomain_spec \
            else self.group(iso.domain_spec, n, degree)

        if experiment == "E1":
            index, ker_n, equal = homs.check_image_index(
                iso, n, amb, domain_points=domain, codomain_points=codomain)
            cell["count"] = index
            cell["flags"] = {"kernel_rational": ker_n, "equal": equal}
            if not equal:
                cell.update(status="fail", reason="index differs from kernel size")
            return

        kernel_amb = None if with_mu else self.field(p, e * iso.kernel_field_degree())
        data = homs.cokernel(iso, n, amb, s_search=cfg.s_search, with_mu=with_mu,
                             seed=cfg.seed, kernel_ambient=kernel_amb,
                             domain_points=domain, codomain_points=codomain)
        mu_ok = homs.verify_mu(data) if with_mu else None
        cell["count"] = len(data.quotient)
        cell["flags"] = {"invariants": data.invariants,
                         "kernel_min_level": data.kernel_min_level,
                         "mu_checked": with_mu, "mu_ok": mu_ok}
        if with_mu and not mu_ok:
            cell.update(status="fail", reason="mu failed verification")

    # -- experiments ------------------------------------------------------------

    def e1(self) -> list[dict]:
        return self._e12_cells("E1")

    def e2(self) -> list[dict]:
        return self._e12_cells("E2")

    def e3(self) -> tuple[list[dict], dict]:
        cfg = self.config
        q, k = cfg.e3_q, cfg.e3_k
        p, e = _prime_power(q)
        cells = []
        hits = []
        for n in range(1, cfg.e3_n_max + 1):
            cell = _cell("E3", spec="Gm", q=q, n=n, k=k,
                         order=orderform.closed_order("Gm", q, n))
            try:
                group = self.group(GmSpec(p, e), n, e * n)
                subs = census.index_k_subgroups(
                    group, k, seed=cfg.seed, candidate_bound=cfg.candidate_bound)
                cell["count"] = len(subs)
                expected = 1 if (q**n - 1) % k == 0 else 0
                cell["flags"] = {"expected_cyclic_count": expected}
                if len(subs) != expected:
                    cell.update(status="fail", reason="count differs from cyclic rule")
                if subs:
                    hits.append(n)
            except Exception as exc:
                cell.update(status="fail", reason=f"{type(exc).__name__}: {exc}")
            cells.append(cell)
        minimal = min(hits) if hits else None
        progression = bool(hits) and all(
            m in set(hits) for m in range(minimal, cfg.e3_n_max + 1, minimal))
        extra = {"levels_with_subgroup": hits, "minimal_level": minimal,
                 "progression_contained": progression}
        return cells, extra

    def e4(self) -> list[dict]:
        cfg = self.config
        expected = {2: {2: 1, 3: 3, 4: 0}, 3: {2: 0, 3: 1, 4: 4}}
        cells = []
        for p, e in cfg.e4_qs:
            q = p**e
            spec = SLSpec(2, p, e)
            for k in cfg.e4_ks:
                cell = _cell("E4", spec="SL2", q=q, n=1, k=k)
                try:
                    group = self.group(spec, 1, e)
                    cell["order"] = len(group)
                    subs = census.index_k_subgroups(
                        group, k, seed=cfg.seed, candidate_bound=cfg.candidate_bound)
                    cell["count"] = len(subs)
                    want = expected.get(q, {}).get(k, 0)
                    flags = {"expected": want}
                    if len(group) <= cfg.oracle_bound:
                        lattice = census.subgroup_lattice_oracle(group, cfg.oracle_bound)
                        oracle_count = sum(1 for s in lattice
                                           if len(group) // len(s) == k)
                        flags["oracle_count"] = oracle_count
                        if oracle_count != len(subs):
                            cell.update(status="fail", reason="census disagrees with oracle")
                    cell["flags"] = flags
                    if len(subs) != want:
                        cell.update(status="fail", reason="unexpected census count")
                except Exception as exc:
                    cell.update(status="fail", reason=f"{type(exc).__name__}: {exc}")
                cells.append(cell)
        return cells

    def e5(self) -> list[dict]:
        cfg = self.config
        cells = []
        for p in primes_in(2, cfg.e5_p_max):
            split = p % 3 == 1
            cell = _cell("E5", spec="NormTorus", q=p, n=1, k=2,
                         flags={"split": split})
            if p == 3:
                cell.update(status="skipped",
                            reason="defining form degenerates in characteristic 3")
                cells.append(cell)
                continue
            try:
                degree = 2
                amb = self.field(p, degree)
                spec = NormTorusSpec(p)
                group = self.group(spec, 1, degree)
                cell["order"] = len(group)
                subs = census.index_k_subgroups(
                    group, 2, seed=cfg.seed, candidate_bound=cfg.candidate_bound)
                cell["count"] = len(subs)
                cover = homs.NormCoverIsogeny(p)
                cover_domain = self.group(cover.domain_spec, 1, degree)
                data = homs.cokernel(cover, 1, amb, seed=cfg.seed,
                                     domain_points=cover_domain,
                                     codomain_points=group)
                reach = []
                for sub in subs:
                    if not set(data.image_ids).issubset(sub.ids):
                        flag = False
                    else:
                        _, flag = homs.induced_isogeny_reaches(
                            cover, sub.ids, 1, amb, seed=cfg.seed, data=data)
                    reach.append({"subgroup_order": sub.order, "normcover": flag})
                cover_hits = sum(1 for r in reach if r.get("normcover"))
                cell["flags"].update({"reached": reach, "cover_reached": cover_hits})
                want = 3 if split else (1 if p % 2 else 0)
                if len(subs) != want:
                    cell.update(status="fail", reason=f"expected {want} subgroups")
                elif split and cover_hits != 1:
                    cell.update(status="fail",
                                reason="cover should reach exactly one subgroup")
            except Exception as exc:
                cell.update(status="fail", reason=f"{type(exc).__name__}: {exc}")
            cells.append(cell)
        return cells

    def e6(self) -> list[dict]:
        cfg = self.config
        cells = []
        data = orderform.BN_CATALOG["SL2"]
        for q in cfg.e6_qs:
            p, e = _prime_power(q)
            cell = _cell("E6", spec="SL2", q=q, n=1)
            try:
                group = self.group(SLSpec(2, p, e), 1, e)
                bn = orderform.bn_order(data, q)
                closed = orderform.closed_order("SL", q, 1)
                z = len(census.center(group))
                z_closed = orderform.center_order("SL", q, 1)
                cell["order"] = len(group)
                cell["flags"] = {"bn": bn, "closed": closed, "enumerated": len(group),
                                 "center": z, "center_closed": z_closed}
                if not (bn == closed == len(group)) or z != z_closed:
                    cell.update(status="fail", reason="order formulas disagree")
            except Exception as exc:
                cell.update(status="fail", reason=f"{type(exc).__name__}: {exc}")
            cells.append(cell)
        ratio_cell = _cell("E6", spec="SL2", q=2, k=None,
                           flags={"check": "ratio strictly increasing"})
        ratios = []
        for n in range(1, cfg.e6_ratio_n_max + 1):
            ratios.append(orderform.closed_order("SL", 2, n)
                          // orderform.center_order("SL", 2, n))
        ratio_cell["flags"]["ratios"] = ratios
        if any(b <= a for a, b in zip(ratios, ratios[1:])):
            ratio_cell.update(status="fail", reason="ratio not strictly increasing")
        cells.append(ratio_cell)
        return cells

    def e7(self) -> list[dict]:
        cfg = self.config
        cells = []
        for p in primes_in(cfg.e7_p_min, cfg.e7_p_max):
            group = None
            for k in range(2, cfg.e7_k_max + 1):
                cell = _cell("E7", spec="SL2", q=p, n=1, k=k,
                             order=orderform.closed_order("SL", p, 1))
                try:
                    if group is None:
                        group = self.group(SLSpec(2, p), 1, 1)
                    subs = census.index_k_subgroups(
                        group, k, seed=cfg.seed, candidate_bound=cfg.candidate_bound)
                    cell["count"] = len(subs)
                    if subs:
                        cell.update(status="fail", reason="unexpected subgroup found")
                except Exception as exc:
                    cell.update(status="fail", reason=f"{type(exc).__name__}: {exc}")
                cells.append(cell)
        return cells

    def e8(self) -> list[dict]:
        cfg = self.config
        cells = []
        for p in cfg.e8_ps:
            for n in range(1, cfg.e8_n_max + 1):
                cell = _cell("E8", spec="Ga", q=p, n=n, k=p,
                             order=p**n)
                try:
                    group = self.group(GaSpec(p), n, n)
                    subs = census.index_k_subgroups(
                        group, p, seed=cfg.seed, candidate_bound=cfg.candidate_bound)
                    want = (p**n - 1) // (p - 1)
                    cell["count"] = len(subs)
                    cell["flags"] = {"expected": want}
                    if len(subs) != want:
                        cell.update(status="fail", reason="hyperplane count mismatch")
                except Exception as exc:
                    cell.update(status="fail", reason=f"{type(exc).__name__}: {exc}")
                cells.append(cell)
        return cells

    # -- orchestration ----------------------------------------------------------

    def run(self, experiment: str) -> dict:
        experiment = experiment.upper()
        if experiment not in EXPERIMENT_IDS:
            raise ValueError(f"unknown experiment {experiment!r}")
        extra: dict = {}
        if experiment == "E3":
            cells, extra = self.e3()
        else:
            cells = getattr(self, experiment.lower())()
        summary = _summarize(cells)
        summary.update(extra)
        return {"experiment": experiment, "cells": cells, "summary": summary}

    def run_all(self) -> dict:
        reports = {eid: self.run(eid) for eid in EXPERIMENT_IDS}
        overall = all(r["summary"]["pass"] for r in reports.values())
        return {"reports": reports,
                "summary": {"all_pass": overall,
                            "experiments": {eid: reports[eid]["summary"]
                                            for eid in EXPERIMENT_IDS}}}


def _prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if is_prime(p) and q % p == 0:
            e = 0
            while q % p == 0:
                q //= p
                e += 1
            if q != 1:
                raise ValueError("q is not a prime power")
            return p, e
    raise ValueError("q is not a prime power")


def _summarize(cells: list[dict]) -> dict:
    passed = sum(1 for c in cells if c["status"] == "pass")
    failed = sum(1 for c in cells if c["status"] == "fail")
    skipped = sum(1 for c in cells if c["status"] == "skipped")
    return {"total": len(cells), "passed": passed, "failed": failed,
            "skipped": skipped, "pass": failed == 0}


# ---------------------------------------------------------------------------
# report serialization

CSV_COLUMNS = ("experiment", "spec", "isogeny", "q", "n", "k", "order",
               "count", "status", "reason", "flags")


def report_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def report_csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for cell in report["cells"]:
        row = [cell.get(c) for c in CSV_COLUMNS[:-1]]
        row.append(json.dumps(cell.get("flags", {}), sort_keys=True))
        writer.writerow(row)
    return buf.getvalue()


def write_reports(result: dict, out_dir: str, fmt: str = "json") -> list[str]:
    """Write one file per experiment plus a summary; returns the paths."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for eid, report in sorted(result["reports"].items()):
        if fmt in ("json", "both"):
            path = os.path.join(out_dir, f"{eid}.json")
            with open(path, "w") as fh:
                fh.write(report_json(report))
            written.append(path)
        if fmt in ("csv", "both"):
            path = os.path.join(out_dir, f"{eid}.csv")
            with open(path, "w") as fh:
                fh.write(report_csv(report))
            written.append(path)
    path = os.path.join(out_dir, "summary.json")
    with open(path, "w") as fh:
        fh.write(report_json(result["summary"]))
    written.append(path)
    return written
