"""Acceptance criteria 1-7.  Each test prints one ``criterion N: PASS|FAIL`` line."""

import json
import subprocess
import sys
import time
from itertools import product
from pathlib import Path

import pytest

from tanakakit import linalg, models
from tanakakit.fieldalg import PointQ
from tanakakit.fintype import char_variety, h0, theorem2_status, validate_witness
from tanakakit.flag import derived_flag, flag_at, level_of
from tanakakit.gnla import _tree_degree, free_gnla, from_structure, gnla_at, hall_basis, heisenberg, witt_dim
from tanakakit.prolong import tanaka_prolongation
from tanakakit.symcheck import (AtLeast, closure, delta_representatives, filtration_degree, graded_symbol,
                                is_symmetry, psi)
from tanakakit.fieldalg import lie_bracket
from tanakakit.modelio import parse_expression

E13_FILE = Path(__file__).resolve().parent.parent / "demos" / "e13.tk"


@pytest.fixture
def report(capsys):
    def emit(n, checks, seconds=None, limit=None):
        failed = [name for name, ok in checks if not ok]
        if limit is not None and seconds > limit:
            failed.append(f"time {seconds:.1f}s > {limit}s")
        status = "PASS" if not failed else "FAIL"
        extra = f" ({seconds:.1f}s)" if seconds is not None else ""
        with capsys.disabled():
            print(f"\ncriterion {n}: {status}{extra}" + (f"  failed: {', '.join(failed)}" if failed else ""))
        assert not failed
    return emit


def test_criterion_1_e13_end_to_end(report):
    t0 = time.perf_counter()
    jm, syms = models.e13_with_symmetries()
    p = PointQ.origin(jm.chart)
    df = derived_flag(jm.frame)
    fp = flag_at(df, p)
    pro = tanaka_prolongation(gnla_at(df, p, fp))
    sa = closure([s.field for s in syms], jm.frame)
    counts = {g: sum(1 for s in syms if filtration_degree(s.field, df, p) == g) for g in range(-4, 2)}
    checks = [
        ("growth (2,1,2,1)", fp.growth == (2, 1, 2, 1)),
        ("prolongation (3,2,0)", pro.dims == (3, 2, 0)),
        ("total 11", pro.total_dim == 11),
        ("11 symmetries", all(is_symmetry(s.field, jm.frame) for s in syms) and len(syms) == 11),
        ("closed, dim 11, Jacobi", sa.closed and sa.dim == 11 and sa.jacobi),
        ("per-grade counts", all(counts[g] == pro.dim(g) for g in range(-4, 2))),
    ]
    report(1, checks, time.perf_counter() - t0, 10)


def _lyndon(n, k):
    return sum(1 for w in product(range(n), repeat=k) if all(w < w[i:] + w[:i] for i in range(1, k)))


def test_criterion_2_free_algebras(report):
    t0 = time.perf_counter()
    witt_ok = all(witt_dim(n, k) == _lyndon(n, k) for n in range(1, 5) for k in range(1, 7))
    hall_ok = all(sum(1 for t in hall_basis(n, k) if _tree_degree(t) == k) == witt_dim(n, k)
                  for n in range(2, 5) for k in range(1, 7))
    pros = {nk: tanaka_prolongation(free_gnla(*nk)) for nk in [(3, 2), (4, 2), (2, 3), (3, 3), (2, 4)]}
    checks = [
        ("witt = Lyndon count", witt_ok),
        ("witt = Hall count", hall_ok),
        ("free(3,2) total 21", pros[(3, 2)].total_dim == 21),
        ("free(4,2) total 36", pros[(4, 2)].total_dim == 36),
        ("free(2,3) total 14", pros[(2, 3)].total_dim == 14),
        ("free(3,3) g1 = 0", pros[(3, 3)].dim(1) == 0),
        ("free(2,4) g1 = 0", pros[(2, 4)].dim(1) == 0),
        ("g0 = n^2", all(pro.dim(0) == n * n for (n, _), pro in pros.items())),
    ]
    report(2, checks, time.perf_counter() - t0, 30)


def test_criterion_3_characteristic_variety(report):
    t0 = time.perf_counter()
    jm = models.monge(1, 3)
    e13 = gnla_at(derived_flag(jm.frame), PointQ.origin(jm.chart))
    goursat = from_structure((2, 1, 1), {(0, 1): {2: 1}, (0, 2): {3: 1}})
    cases = {"e13": e13, "heisenberg": heisenberg(), "goursat": goursat, "free32": free_gnla(3, 2),
             "free23": free_gnla(2, 3), "free33": free_gnla(3, 3)}
    res = {}
    for name, a in cases.items():
        pro = tanaka_prolongation(a, max_degree=6)
        h = h0(pro)
        res[name] = (pro, h, char_variety(h))
    heis_pro, heis_h, heis_v = res["heisenberg"]
    cross = True
    for pro, h, v in res.values():
        if v.verdict == "empty" and not pro.terminated:
            cross = False
        if v.verdict == "nonempty" and v.has_witness and pro.terminated:
            cross = False
    checks = [
        ("h0(E13) = 0", res["e13"][1].dim == 0),
        ("E13 empty", res["e13"][2].verdict == "empty"),
        ("heisenberg witness", heis_v.verdict == "nonempty" and heis_v.has_witness
         and validate_witness(heis_h, heis_v.witness_p, heis_v.witness_q)),
        ("goursat nonempty", res["goursat"][2].verdict == "nonempty"),
        ("free(3,2) empty", res["free32"][2].verdict == "empty"),
        ("cross invariant", cross),
    ]
    report(3, checks, time.perf_counter() - t0, 60)


def test_criterion_4_growth_classifier(report):
    finite = [(3, 3), (4, 5), (4, 6), (2, 1, 2)]
    inconclusive = [(2, 1, 1), (3, 1), (3, 2), (4, 1), (4, 2), (4, 3), (4, 4)]
    checks = [(f"{g} finite", theorem2_status(g) == "finite") for g in finite]
    checks += [(f"{g} inconclusive", theorem2_status(g) == "inconclusive") for g in inconclusive]
    report(4, checks)


def test_criterion_5_infinite_families(report):
    jm = models.product_with_jets(models.monge(1, 3), 2)
    fields = []
    for expr in ("1", "w", "w^2", "w^3"):
        f = parse_expression(f"({expr})*d/dx", jm.chart).components[0]
        fields.append(models.prolonged_w_field(jm, f))
    flat = [{(i, e): c for i, comp in enumerate(X.components) for e, c in comp.terms.items()} for X in fields]
    goursat = []
    for k in range(1, 7):
        cj = models.cartan_jet(k)
        df = derived_flag(cj.frame)
        p = PointQ.origin(cj.chart)
        goursat.append(models.goursat_test(df, p) and models.deprolongation_witness(df, p) is not None)
    checks = [
        ("f(w) fields are symmetries", all(is_symmetry(X, jm.frame) for X in fields)),
        ("four independent", linalg.rank(flat) == 4),
        ("goursat + witness for k <= 6", all(goursat)),
    ]
    report(5, checks)


def test_criterion_6_psi_properties(report):
    jm, syms = models.e13_with_symmetries()
    p = PointQ.origin(jm.chart)
    df = derived_flag(jm.frame)
    fp = flag_at(df, p)
    pro = tanaka_prolongation(gnla_at(df, p, fp))
    reps = delta_representatives(df, p, fp)
    deg = {s.name: filtration_degree(s.field, df, p) for s in syms}

    half = True
    for s in syms:
        i = deg[s.name]
        if i >= 0:
            for args in product(reps, repeat=i + 1):
                half &= level_of(fp, psi(s.field, list(args), p)) <= 1

    rng = True
    kappa = df.depth
    for s in syms:
        i = deg[s.name]
        for j in (1, 2):
            for lv in product(range(1, kappa + 1), repeat=j):
                for args in product(*[df.level(t) for t in lv]):
                    v = psi(s.field, list(args), p)
                    target = sum(lv) - i
                    rng &= (not any(v)) if target <= 0 else level_of(fp, v) <= min(target, kappa)

    add = True
    for a in syms:
        for b in syms:
            d = filtration_degree(lie_bracket(a.field, b.field), df, p, cap=4)
            need = deg[a.name] + deg[b.name]
            add &= (d.value >= need) if isinstance(d, AtLeast) else d >= need

    symbols = True
    for s in syms:
        try:
            graded_symbol(s.field, df, pro, p)
        except Exception:
            symbols = False
    checks = [("values in D", half), ("level ranges", rng), ("degrees add", add), ("symbol membership", symbols)]
    report(6, checks)


def test_criterion_7_determinism(report):
    cmd = [sys.executable, "-m", "tanakakit.cli", "analyze", str(E13_FILE), "--seed", "42", "--json", "-"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    checks = [("byte-identical", a == b), ("valid JSON with seed", json.loads(a)["seed"] == 42)]
    report(7, checks)
