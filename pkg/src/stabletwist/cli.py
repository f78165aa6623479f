"""Command line front end: check, build, apply, report, invariants, selftest.

Exit codes: 0 when every check passes, 2 when a check fails, 1 on an internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import permgroup as pg
from .config import SHIPPED, Experiment, load
from .exactcore import WorkbenchError
from .intinv import congruence_report, derived_equivalence_conclusion
from .modrep import (
    LoewyProfile,
    cartan_matrix,
    endo_trivial_test,
    iso_test,
    loewy,
    socle_profile,
    strip_projectives,
)
from .twist import top_end_dimensions, rho_trivial_vs_relative_syzygy, transport, verify_twist

SCHEMA = 1
EXIT_PASS, EXIT_ERROR, EXIT_FAIL = 0, 1, 2

SUBGROUP_CHECK_GROUPS = {
    "D8": lambda: pg.dihedral_group(8),
    "SD16": lambda: pg.semidihedral_group(16),
    "S4_sylow2": lambda: pg.sylow_subgroup(pg.symmetric_group(4), 2),
}


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, default=_plain) + "\n"


def _plain(x):
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"cannot serialise {type(x).__name__}")


# ---------------------------------------------------------------------------
# shared pieces


def assumption_lines(exp: Experiment) -> list[str]:
    rep = exp.report
    lines = []
    for level, ok, names in (
        (1, rep.assumption1, "A_symmetric R_symmetric R_nonsemisimple A_R_projective a b c"),
        (2, rep.assumption2, "A_symmetric R_symmetric R_nonsemisimple A_R_projective a_prime b c d e"),
    ):
        if ok:
            via = " (via semidirect route)" if level == 2 and rep.semidirect is not None and rep.semidirect.ok else ""
            lines.append(f"Assumption {level}: PASS{via}")
        else:
            bad = rep.failed(names.split())
            reasons = "; ".join(f"{n}: {rep.conditions[n].detail}" for n in bad)
            lines.append(f"Assumption {level}: FAIL ({reasons})")
    return lines


def claim_holds(exp: Experiment) -> bool:
    rep = exp.report
    return rep.assumption1 if exp.claimed == 1 else rep.assumption2


def _profiles(M) -> dict:
    return {"dim": M.dim, "radical": str(loewy(M)), "socle": str(socle_profile(M))}


def _match(M, text: str) -> str | None:
    """Which layer structure of M (if any) equals the diagram ``text``."""
    labels = M.algebra.simple_labels
    want = LoewyProfile.parse(text, labels)
    if loewy(M) == want:
        return "radical"
    if socle_profile(M) == want:
        return "socle"
    return None


def image_entry(exp: Experiment, name: str) -> dict:
    X = exp.module(name)
    Y = exp.module(f"rho({name})")
    C = exp.basic
    shown = transport(Y, C) if C is not None else Y
    entry = {
        "source": _profiles(transport(X, C) if C is not None else X),
        "image": _profiles(shown),
        "image_over": "basic algebra" if C is not None else "A",
        "image_dim_over_A": Y.dim,
    }
    want = exp.raw.get("expected", {}).get("images", {}).get(name)
    if want is not None:
        entry["expected_diagram"] = want
        entry["diagram_match"] = _match(shown, want)
    iso = exp.raw.get("expected", {}).get("isomorphic", {}).get(name)
    if iso is not None:
        Z = strip_projectives(exp.module(iso))
        r = iso_test(Y, Z, exp.seed)
        entry["isomorphic_to"] = {"module": iso, "verdict": r.verdict, "reason": r.reason}
    return entry


def image_ok(entry: dict) -> bool:
    ok = entry.get("diagram_match", "radical") is not None
    if "isomorphic_to" in entry:
        ok = ok and entry["isomorphic_to"]["verdict"] == "Isomorphic"
    return ok


def cartan_section(exp: Experiment) -> dict | None:
    spec = exp.raw.get("cartan")
    if not spec:
        return None
    mats = {k: np.asarray(cartan_matrix([exp.module(n) for n in names])).tolist() for k, names in sorted(spec.items())}
    keys = sorted(mats)
    out = {"modules": {k: list(spec[k]) for k in keys}, "matrices": mats}
    if len(keys) == 2:
        v = congruence_report(mats[keys[0]], mats[keys[1]])
        out["congruence"] = v.to_json()
        out["conclusion"] = derived_equivalence_conclusion(v)
    return out


def endo_trivial_section(exp: Experiment) -> dict:
    Y = exp.module("rho(k)")
    r = endo_trivial_test(Y, exp.seed)
    order = exp.group.order
    return {
        "module": "rho(k)",
        "dim": Y.dim,
        "endo_trivial": bool(r),
        "verdict": r.verdict,
        "group_order": order,
        "dim_squared_mod_order": (Y.dim * Y.dim) % order,
    }


def subgroup_section(names) -> dict:
    out = {}
    for n in names:
        P = SUBGROUP_CHECK_GROUPS[n]()
        res = pg.order_p_subgroup_checks(P, 2)
        res["order"] = P.order
        res["ok"] = res["double_coset_ok"] == res["subgroups"] == res["centralizer_ok"]
        out[n] = res
    return out


def twist_summary(exp: Experiment) -> dict:
    T = exp.twist
    return {
        "period": T.q,
        "induced_dim": exp.report.extra.get("induced_dim"),
        "chain_dims": [M.dim for M in T.chain],
        "cone_steps": [
            {"p": s.p, "cover_dim": s.cover_dim, "kernel_dim": s.kernel_dim, "exact": s.exact} for s in T.steps
        ],
        "Mq_dim": T.Mq.dim,
    }


def full_report(exp: Experiment) -> tuple[dict, bool]:
    """Assemble the verification report; returns (json-ready dict, all passed)."""
    rep = exp.report
    out = {
        "schema": SCHEMA,
        "name": exp.name,
        "description": exp.raw.get("description", ""),
        "seed": exp.seed,
        "field": exp.field.to_dict(),
        "algebra": {"dim": exp.algebra.dim, "simple_labels": list(exp.algebra.simple_labels)},
        "claimed_assumption": exp.claimed,
        "claim_holds": claim_holds(exp),
        "triple": rep.to_json(),
        "assumption_lines": assumption_lines(exp),
    }
    ok = out["claim_holds"]
    data = exp.checked[1]
    if data is None:
        return out, False
    out["twist"] = twist_summary(exp)
    mods = exp.raw.get("modules", {})
    out["images"] = {n: image_entry(exp, n) for n in mods.get("apply", [])}
    ok = ok and all(image_ok(e) for e in out["images"].values())
    expected_mods = exp.raw.get("expected", {}).get("modules", {})
    if expected_mods:
        out["modules"] = {}
        for n, want in sorted(expected_mods.items()):
            M = exp.module(n)
            out["modules"][n] = dict(_profiles(M), expected_diagram=want, diagram_match=_match(M, want))
            ok = ok and out["modules"][n]["diagram_match"] is not None
    corpus = {n: exp.module(n) for n in mods.get("corpus", [])}
    checks = verify_twist(data, corpus, exp.seed)
    out["verify_twist"] = {
        "checks": [c.to_json() for c in checks],
        "passed": sum(c.ok for c in checks),
        "total": len(checks),
    }
    ok = ok and all(c.ok for c in checks)
    cart = cartan_section(exp)
    if cart is not None:
        out["cartan"] = cart
    flags = exp.raw.get("report", {})
    if flags.get("endo_trivial"):
        out["endo_trivial"] = endo_trivial_section(exp)
        ok = ok and out["endo_trivial"]["endo_trivial"]
    if flags.get("relative_syzygy"):
        rs = rho_trivial_vs_relative_syzygy(data, exp.seed)
        out["relative_syzygy"] = rs.to_json()
        ok = ok and rs.verdict == "Isomorphic"
    if flags.get("top_end_dimensions"):
        out["top_end_dimensions"] = top_end_dimensions(data)
    if flags.get("subgroup_checks"):
        out["order_p_subgroups"] = subgroup_section(flags["subgroup_checks"])
        ok = ok and all(v["ok"] for v in out["order_p_subgroups"].values())
    out["passed"] = bool(ok)
    return out, bool(ok)


# ---------------------------------------------------------------------------
# figures


def _figure_setup():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _draw_diagram(ax, text: str, title: str):
    layers = [] if text == "0" else [c.strip("[]").split() for c in text.split("/")]
    ax.set_title(title, fontsize=9)
    ax.axis("off")
    if not layers:
        ax.text(0.5, 0.5, "0", ha="center", va="center")
        return
    width = max(len(l) for l in layers)
    for r, layer in enumerate(layers):
        for c, lab in enumerate(layer):
            x = c - (len(layer) - 1) / 2
            ax.text(x, -r, lab, ha="center", va="center", fontsize=10,
                    bbox=dict(boxstyle="circle", fc="white", ec="0.3"))
    ax.set_xlim(-width / 2 - 0.5, width / 2 + 0.5)
    ax.set_ylim(-len(layers) + 0.5, 0.5)


def write_figures(report: dict, outdir: Path) -> list[str]:
    plt = _figure_setup()
    written = []
    meta = {"Software": None}
    images = report.get("images", {})
    if images:
        fig, axes = plt.subplots(1, 2 * len(images), figsize=(2.2 * 2 * len(images), 4), squeeze=False)
        for i, (name, e) in enumerate(sorted(images.items())):
            _draw_diagram(axes[0][2 * i], e["source"]["radical"], name)
            _draw_diagram(axes[0][2 * i + 1], e["image"]["radical"], f"rho({name})")
        fig.suptitle(f"{report['name']}: radical layers, top first", fontsize=10)
        p = outdir / f"{report['name']}_loewy.png"
        fig.savefig(p, dpi=100, metadata=meta)
        plt.close(fig)
        written.append(p.name)
    cart = report.get("cartan")
    if cart:
        keys = sorted(cart["matrices"])
        fig, axes = plt.subplots(1, len(keys), figsize=(3.2 * len(keys), 3.2), squeeze=False)
        for ax, k in zip(axes[0], keys):
            m = np.array(cart["matrices"][k])
            ax.imshow(m, cmap="Blues")
            for (i, j), v in np.ndenumerate(m):
                ax.text(j, i, str(v), ha="center", va="center")
            ax.set_title(k)
            ax.set_xticks(range(len(m)), cart["modules"][k])
            ax.set_yticks(range(len(m)), cart["modules"][k])
        p = outdir / f"{report['name']}_cartan.png"
        fig.tight_layout()
        fig.savefig(p, dpi=100, metadata=meta)
        plt.close(fig)
        written.append(p.name)
    return written


# ---------------------------------------------------------------------------
# subcommands


def cmd_check(args) -> int:
    exp = load(args.config, args.seed)
    for line in assumption_lines(exp):
        print(line)
    if args.verbose:
        for k, v in exp.report.conditions.items():
            print(f"  {k:16s} {'ok ' if v.ok else 'FAIL'} {v.detail}")
        if exp.report.semidirect is not None:
            print(f"  semidirect       {'ok ' if exp.report.semidirect.ok else 'FAIL'} {exp.report.semidirect.detail}")
    ok = claim_holds(exp)
    print(f"claimed Assumption {exp.claimed}: {'PASS' if ok else 'FAIL'}")
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_build(args) -> int:
    exp = load(args.config, args.seed)
    if exp.checked[1] is None:
        for line in assumption_lines(exp):
            print(line)
        return EXIT_FAIL
    T = exp.twist
    M = T.Mq
    archive = {
        "schema": SCHEMA,
        "name": exp.name,
        "seed": exp.seed,
        "field": exp.field.to_dict(),
        "dims": {"A": exp.algebra.dim, "R": exp.R.dim, "B": exp.B.dim, "Mq": M.dim},
        "period": T.q,
        "chain_dims": [X.dim for X in T.chain],
        "Mq": {
            "left_actions": [g.tolist() for g in M.left_gens],
            "right_actions": [g.tolist() for g in M.right_gens],
            "convention": "row vectors; left_actions[i] is m -> a_i m, right_actions[i] is m -> m a_i, "
            "for the algebra generators in basis order",
        },
        "report": exp.report.to_json(),
    }
    text = dumps(archive)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out} (dim M_q = {M.dim})")
    else:
        sys.stdout.write(text)
    return EXIT_PASS


def cmd_apply(args) -> int:
    exp = load(args.config, args.seed)
    Y = exp.module(f"rho({args.module})")
    C = exp.basic
    shown = transport(Y, C) if C is not None else Y
    where = "basic algebra" if C is not None else "A"
    print(f"rho({args.module}) over {where}: dim {shown.dim}")
    print(f"  radical layers: {loewy(shown)}")
    print(f"  socle layers:   {socle_profile(shown)}")
    if C is not None:
        print(f"  dim over A: {Y.dim}")
    return EXIT_PASS


def cmd_report(args) -> int:
    exp = load(args.config, args.seed)
    report, ok = full_report(exp)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / f"{exp.name}.json"
    path.write_text(dumps(report))
    figs = [] if args.no_figures else write_figures(report, outdir)
    for line in report["assumption_lines"]:
        print(line)
    for name, e in report.get("images", {}).items():
        extra = ""
        if "isomorphic_to" in e:
            extra = f"; vs {e['isomorphic_to']['module']}: {e['isomorphic_to']['verdict']}"
        print(f"rho({name}) = {e['image']['radical']} (socle {e['image']['socle']}, dim {e['image']['dim']}){extra}")
    if "verify_twist" in report:
        v = report["verify_twist"]
        print(f"verify_twist: {v['passed']}/{v['total']} checks pass")
    if "cartan" in report:
        for k, m in sorted(report["cartan"]["matrices"].items()):
            print(f"Cartan {k}: {m}")
        if "conclusion" in report["cartan"]:
            print(report["cartan"]["conclusion"])
    if "endo_trivial" in report:
        e = report["endo_trivial"]
        print(f"endo-trivial rho(k): {'yes' if e['endo_trivial'] else 'no'} (End vs k: {e['verdict']}), dim {e['dim']}, dim^2 mod {e['group_order']} = {e['dim_squared_mod_order']}")
    if "relative_syzygy" in report:
        print(f"rho(k) vs relative syzygy: {report['relative_syzygy']['verdict']}")
    for n, v in report.get("order_p_subgroups", {}).items():
        print(f"order-2 subgroups of {n}: {'PASS' if v['ok'] else 'FAIL'} ({v['subgroups']} subgroups of order 2)")
    print(f"wrote {path}" + "".join(f", {outdir / f}" for f in figs))
    print("report: PASS" if ok else "report: FAIL")
    return EXIT_PASS if ok else EXIT_FAIL


def _read_matrix(path: str):
    data = json.loads(Path(path).read_text())
    if isinstance(data, dict):
        data = data.get("matrix", data)
    return [[int(x) for x in row] for row in data]


def cmd_invariants(args) -> int:
    M, N = _read_matrix(args.a), _read_matrix(args.b)
    v = congruence_report(M, N)
    out = {"schema": SCHEMA, "a": M, "b": N, **v.to_json(), "conclusion": derived_equivalence_conclusion(v)}
    sys.stdout.write(dumps(out))
    return EXIT_PASS


def cmd_selftest(args) -> int:
    """Fast end-to-end smoke run on the D8 example plus a semisimple control."""
    results = []
    exp = load("d8_twist", args.seed)
    results.append(("d8 Assumption 1", exp.report.assumption1))
    rk = exp.module("rho(k)")
    results.append(("d8 rho(k) endo-trivial", bool(endo_trivial_test(rk, exp.seed))))
    results.append(("d8 dim^2 = 1 mod 8", rk.dim * rk.dim % 8 == 1))
    # kS4 in characteristic 2 with R = k<(123)>, which is semisimple
    base = load("ex61i", args.seed).raw
    raw = dict(base, triple={"R": ["(123)"], "B": ["(34)"]})
    ctl = Experiment(raw, exp.seed)
    results.append(("semisimple R rejected", not ctl.report.conditions["R_nonsemisimple"].ok))
    for name, ok in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    return EXIT_PASS if all(ok for _, ok in results) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stabletwist", description="Stable auto-equivalences from periodic twists.")
    sub = p.add_subparsers(dest="command", required=True)
    cfg_help = f"path to a TOML experiment or a shipped name ({', '.join(SHIPPED)})"

    def add(name, fn, help_text, config=True):
        sp = sub.add_parser(name, help=help_text)
        if config:
            sp.add_argument("config", help=cfg_help)
        sp.add_argument("--seed", type=int, default=None, help="overrides WORKBENCH_SEED and the config seed")
        sp.set_defaults(func=fn)
        return sp

    c = add("check", cmd_check, "decide Assumptions 1 and 2 for the triple")
    c.add_argument("-v", "--verbose", action="store_true")
    b = add("build", cmd_build, "construct M_q and emit it as JSON")
    b.add_argument("--out", default=None)
    a = add("apply", cmd_apply, "apply the twist to a named module")
    a.add_argument("--module", required=True)
    r = add("report", cmd_report, "full verification report with figures")
    r.add_argument("--out", default="reports")
    r.add_argument("--no-figures", action="store_true")
    i = add("invariants", cmd_invariants, "congruence invariants of two integer matrices", config=False)
    i.add_argument("--a", required=True)
    i.add_argument("--b", required=True)
    add("selftest", cmd_selftest, "quick smoke test", config=False)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (WorkbenchError, KeyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
