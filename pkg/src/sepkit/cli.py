"""Command-line front end.

Subcommands: classify, depolarize, distill, witness, threshold, selftest.
Reports go to stdout (JSON by default, ``--text`` for a summary),
diagnostics to stderr. Exit codes: 0 success, 2 invalid input, 3 requested
result not applicable (e.g. the pair is not distillable).
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__, stateio, tensor
from . import classify as classify_mod
from . import distill as distill_mod
from . import witness as witness_mod
from .family import GhzWeights, depolarize, family_density, random_weights, werner_like
from .stateio import StateFileError, qubit_label

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NOT_APPLICABLE = 3

DEPOLARIZED_NOTE = (
    "input was projected onto the diagonal family; the reported class is a "
    "sufficient condition for the input state (its own class is at most the "
    "reported one)"
)


def _resolve_weights(state: stateio.StateInput) -> tuple[GhzWeights, bool]:
    if state.weights is not None:
        return state.weights, False
    return depolarize(state.matrix), True


def _pt_label(mask: int, n: int) -> str:
    return "".join(qubit_label(q) for q in tensor.mask_to_qubits(mask, n))


def _pair_labels(pair) -> list[str]:
    return [qubit_label(q) for q in sorted(pair)]


def _emit(args, report: dict, text_lines: list[str]) -> None:
    if args.fmt == "text":
        sys.stdout.write("\n".join(text_lines) + "\n")
    else:
        sys.stdout.write(stateio.dump_report(report, args.precision))


def _yesno(flag: bool) -> str:
    return "yes" if flag else "no"


def cmd_classify(args) -> int:
    state = stateio.load_state(args.input)
    w, depolarized = _resolve_weights(state)
    rep = classify_mod.classify_family(w)
    n = w.n_qubits
    report = {
        "tool_version": __version__,
        "command": "classify",
        "tolerance": args.tol,
        "n_qubits": n,
        "depolarized": depolarized,
        "input_notes": list(state.notes),
        "weights": stateio.weights_dict(w),
        "pt_positive": {
            _pt_label(mask, n): positive for mask, positive in sorted(rep.pt_positive.items(), reverse=True)
        },
        "class": rep.class3,
        "biseparable_qubits": [qubit_label(q) for q in sorted(rep.biseparable_qubits)],
        "fully_separable": rep.fully_separable,
        "ghz_distillable": rep.ghz_distillable,
        "distillable_pairs": [_pair_labels(p) for p in sorted(rep.distillable_pairs)],
        "activation_hint": _pair_labels(rep.activation_hint) if rep.activation_hint else None,
    }
    if depolarized:
        report["note"] = DEPOLARIZED_NOTE
    if n != 3:
        report["ghz_distillable_note"] = (
            "criterion extended beyond three qubits: negative partial transpose "
            "for every bipartition"
        )
    lines = [
        f"state: {n} qubits" + (" (depolarized from matrix input)" if depolarized else ""),
        "PT positive: "
        + "  ".join(f"{lab}={_yesno(v)}" for lab, v in report["pt_positive"].items()),
        f"class: {rep.class3 if rep.class3 is not None else 'n/a (not 3 qubits)'}",
        f"fully separable: {_yesno(rep.fully_separable)}",
        f"GHZ distillable: {_yesno(rep.ghz_distillable)}",
        "distillable pairs: "
        + (", ".join("".join(p) for p in report["distillable_pairs"]) or "none"),
        "activation hint: "
        + ("".join(report["activation_hint"]) if report["activation_hint"] else "none"),
    ]
    _emit(args, report, lines)
    return EXIT_OK


def cmd_depolarize(args) -> int:
    state = stateio.load_state(args.input)
    w, depolarized = _resolve_weights(state)
    report = {
        "tool_version": __version__,
        "command": "depolarize",
        "tolerance": args.tol,
        "n_qubits": w.n_qubits,
        "depolarized": depolarized,
        "input_notes": list(state.notes),
        "weights": stateio.weights_dict(w),
    }
    lines = [
        f"n_qubits: {w.n_qubits}",
        f"lambda0_plus:  {w.lambda0_plus!r}",
        f"lambda0_minus: {w.lambda0_minus!r}",
        f"lambdas: {list(w.lambdas)!r}",
        f"delta: {w.delta!r}",
        f"basis flipped: {_yesno(w.basis_flipped)}",
    ]
    _emit(args, report, lines)
    return EXIT_OK


def cmd_threshold(args) -> int:
    if args.n < 3:
        raise StateFileError("threshold is defined for n >= 3")
    denominator = 1 + (1 << (args.n - 1))
    value = 1.0 / denominator
    report = {
        "tool_version": __version__,
        "command": "threshold",
        "n_qubits": args.n,
        "threshold_rational": f"1/{denominator}",
        "threshold_decimal": value,
        "statement": (
            "a maximally entangled state mixed with full noise is nonseparable "
            "and distillable exactly above this mixing weight"
        ),
    }
    lines = [f"1/{denominator} = {value!r}"]
    _emit(args, report, lines)
    return EXIT_OK


def cmd_distill(args) -> int:
    state = stateio.load_state(args.input)
    w, depolarized = _resolve_weights(state)
    if w.n_qubits != 3:
        raise StateFileError("distillation planning requires a 3-qubit state")
    tokens = args.pair.split(",")
    if len(tokens) != 2:
        raise StateFileError("--pair expects two qubits, e.g. B,C")
    i, k = (stateio.parse_qubit(t, 3) for t in tokens)
    if i == k:
        raise StateFileError("--pair expects two distinct qubits")
    report = {
        "tool_version": __version__,
        "command": "distill",
        "tolerance": args.tol,
        "n_qubits": 3,
        "depolarized": depolarized,
        "input_notes": list(state.notes),
        "pair": [qubit_label(q) for q in sorted((i, k))],
        "projected_qubit": qubit_label(3 - i - k),
    }
    try:
        outcome = distill_mod.plan_pair_distillation(w, i, k, m=args.m)
    except distill_mod.FilterCapReachedError as exc:
        report["distillable"] = True
        report["error"] = str(exc)
        _emit(args, report, [f"distillable, but {exc}"])
        return EXIT_NOT_APPLICABLE
    if outcome is None:
        report["distillable"] = False
        report["reason"] = (
            "a partial transpose separating the pair is positive; no filtering "
            "protocol can distill this pair"
        )
        _emit(args, report, ["not distillable: " + report["reason"]])
        print("sepkit: pair is not distillable", file=sys.stderr)
        return EXIT_NOT_APPLICABLE
    report.update(
        {
            "distillable": True,
            "m_used": outcome.m_used,
            "m_was_given": args.m is not None,
            "filtered_weights": stateio.weights_dict(outcome.filtered_weights),
            "filter_success_probability": outcome.filter_success_probability,
            "projection_success_probability": outcome.projection_success_probability,
            "pair_fidelity": outcome.pair_fidelity,
            "purifiable": outcome.purifiable,
        }
    )
    lines = [
        f"pair: {','.join(report['pair'])} (projecting {report['projected_qubit']})",
        f"copies used: {outcome.m_used}",
        f"filter success probability: {outcome.filter_success_probability!r}",
        f"pair fidelity after projection: {outcome.pair_fidelity!r}",
        f"purifiable (fidelity > 1/2): {_yesno(outcome.purifiable)}",
    ]
    if args.oracle:
        if outcome.m_used <= distill_mod.DENSE_ORACLE_MAX_COPIES:
            relabeled = distill_mod.relabel_for_projection(w, 3 - i - k, i, k)
            sigma, prob = distill_mod.dense_filter_oracle(relabeled, outcome.m_used)
            state_dev = float(
                np.abs(family_density(outcome.filtered_weights) - sigma).max()
            )
            prob_dev = abs(prob - outcome.filter_success_probability)
            report["oracle"] = {
                "m": outcome.m_used,
                "state_max_abs_deviation": state_dev,
                "probability_abs_deviation": prob_dev,
            }
            lines.append(
                f"dense oracle deviation: state {state_dev:.3e}, probability {prob_dev:.3e}"
            )
        else:
            report["oracle"] = {
                "skipped": f"m={outcome.m_used} exceeds the dense-oracle cap "
                f"({distill_mod.DENSE_ORACLE_MAX_COPIES})"
            }
            lines.append("dense oracle skipped: copy count above cap")
    _emit(args, report, lines)
    return EXIT_OK


def cmd_witness(args) -> int:
    state = stateio.load_state(args.input)
    w, depolarized = _resolve_weights(state)
    if w.n_qubits != 3:
        raise StateFileError("witness constructions require a 3-qubit state")
    rho_tilde = witness_mod.build_rho_tilde(w)
    mask_a = tensor.qubits_to_mask((0,), 3)
    residual = float(
        np.abs(tensor.partial_transpose(rho_tilde, mask_a) - rho_tilde).max()
    )
    min_eig = tensor.min_eigenvalue(rho_tilde)
    rep = classify_mod.classify3(w)
    report = {
        "tool_version": __version__,
        "command": "witness",
        "tolerance": args.tol,
        "n_qubits": 3,
        "depolarized": depolarized,
        "input_notes": list(state.notes),
        "class": rep.class3,
        "rho_tilde": {
            "pt_invariance_residual": residual,
            "min_eigenvalue": min_eig,
            "positive_semidefinite": min_eig >= -args.tol,
            "delta_le_2lambda2": w.delta <= 2.0 * w.lam(2),
        },
    }
    lines = [
        f"class: {rep.class3}",
        f"rho_tilde PT-invariance residual: {residual:.3e}",
        f"rho_tilde min eigenvalue: {min_eig!r}",
    ]
    if rep.class3 == 5:
        ensemble = witness_mod.fully_separable_ensemble(w)
        hat = witness_mod.rho_hat_density(witness_mod.build_rho_hat(w))
        recon = witness_mod.verify_ensemble(ensemble, hat)
        wd = depolarize(hat)
        round_trip = max(
            abs(wd.lambda0_plus - w.lambda0_plus),
            abs(wd.lambda0_minus - w.lambda0_minus),
            max(abs(a - b) for a, b in zip(wd.lambdas, w.lambdas)),
        )
        report["ensemble"] = {
            "term_count": len(ensemble.terms),
            "reconstruction_residual": recon,
            "depolarize_round_trip_max_error": round_trip,
            **stateio.ensemble_dict(ensemble),
        }
        report["ensemble_error"] = None
        lines.append(
            f"separable ensemble: {len(ensemble.terms)} product terms, "
            f"reconstruction residual {recon:.3e}"
        )
        if args.ensemble_out:
            with open(args.ensemble_out, "w", encoding="utf-8") as fh:
                fh.write(stateio.dump_report(stateio.ensemble_dict(ensemble), args.precision))
            lines.append(f"ensemble written to {args.ensemble_out}")
    else:
        report["ensemble"] = None
        report["ensemble_error"] = (
            f"state is in class {rep.class3}, not fully separable; "
            "no product ensemble exists"
        )
        lines.append("separable ensemble: not applicable (" + report["ensemble_error"] + ")")
        if args.ensemble_out:
            _emit(args, report, lines)
            print("sepkit: " + report["ensemble_error"], file=sys.stderr)
            return EXIT_NOT_APPLICABLE
    _emit(args, report, lines)
    return EXIT_OK


def cmd_selftest(args) -> int:
    rng = np.random.default_rng(args.seed)
    checks = 0
    failures: list[str] = []

    def expect(ok: bool, label: str) -> None:
        nonlocal checks
        checks += 1
        if not ok:
            failures.append(label)

    for n, count in ((3, 40), (4, 15)):
        for idx in range(count):
            w = random_weights(n, rng)
            rho = family_density(w)
            for mask in classify_mod.bipartition_masks(n):
                analytic = classify_mod.pt_positive_analytic(w, mask)
                numeric = tensor.is_ppt(rho, mask, tol=args.tol)
                expect(analytic == numeric, f"pt agreement n={n} draw={idx} mask={mask}")

    for idx in range(8):
        w = random_weights(3, rng)
        filtered, prob = distill_mod.amplify(w, 2)
        sigma, prob_oracle = distill_mod.dense_filter_oracle(w, 2)
        expect(
            float(np.abs(family_density(filtered) - sigma).max()) <= 1e-10,
            f"filter oracle state draw={idx}",
        )
        expect(abs(prob - prob_oracle) <= 1e-12, f"filter oracle probability draw={idx}")

    plus = np.array([1.0, 1.0]) / np.sqrt(2.0)
    bell = np.zeros(4, dtype=complex)
    bell[0] = bell[3] = 1.0 / np.sqrt(2.0)
    for idx in range(200):
        w = random_weights(3, rng)
        fid, _ = distill_mod.pair_fidelity_after_projection(w)
        expect(
            (fid > 0.5) == (w.delta / 2.0 > w.lam(1) + w.lam(3)),
            f"fidelity criterion draw={idx}",
        )
        if idx < 20:
            reduced, prob = tensor.project_qubit(family_density(w), 0, plus)
            dense_fid = float(np.real(bell.conj() @ reduced @ bell))
            expect(abs(dense_fid - fid) <= 1e-12, f"dense fidelity draw={idx}")
            expect(abs(prob - 0.5) <= 1e-12, f"projection probability draw={idx}")

    for n in range(3, 7):
        x = 1.0 / (1 + (1 << (n - 1)))
        expect(
            classify_mod.fully_separable(werner_like(n, x - 1e-9)),
            f"threshold separable side n={n}",
        )
        expect(
            not classify_mod.fully_separable(werner_like(n, x + 1e-9)),
            f"threshold entangled side n={n}",
        )

    report = {
        "tool_version": __version__,
        "command": "selftest",
        "tolerance": args.tol,
        "seed": args.seed,
        "checks": checks,
        "failures": failures,
    }
    lines = [f"seed: {args.seed}", f"checks: {checks}", f"failures: {len(failures)}"]
    _emit(args, report, lines)
    return EXIT_OK if not failures else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sepkit",
        description="Classify, witness and plan distillation for GHZ-diagonal states.",
    )
    parser.add_argument(
        "--version", action="version", version=f"sepkit {__version__}"
    )
    # selftest stays reachable but is not advertised in the usage line
    sub = parser.add_subparsers(
        dest="command",
        required=True,
        metavar="{classify,depolarize,distill,witness,threshold}",
    )

    def common(sp, with_input=True):
        if with_input:
            sp.add_argument("--input", required=True, help="state file (JSON)")
        sp.add_argument(
            "--tol",
            type=float,
            default=tensor.DEFAULT_PT_TOL,
            help="positivity tolerance on minimum eigenvalues",
        )
        sp.add_argument(
            "--precision",
            type=int,
            default=17,
            help="significant digits for emitted floats (17 = exact round trip)",
        )
        group = sp.add_mutually_exclusive_group()
        group.add_argument(
            "--json", dest="fmt", action="store_const", const="json", default="json"
        )
        group.add_argument("--text", dest="fmt", action="store_const", const="text")

    sp = sub.add_parser("classify", help="separability/distillability classification")
    common(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("depolarize", help="project a state onto the diagonal family")
    common(sp)
    sp.set_defaults(func=cmd_depolarize)

    sp = sub.add_parser("distill", help="plan pair distillation via the multi-copy filter")
    common(sp)
    sp.add_argument("--pair", required=True, help="target pair, e.g. B,C or 1,2")
    sp.add_argument("--m", type=int, default=None, help="copy count (default: minimal)")
    sp.add_argument(
        "--oracle",
        action="store_true",
        help="cross-check the filtered state against the dense construction",
    )
    sp.set_defaults(func=cmd_distill)

    sp = sub.add_parser("witness", help="emit separability certificates")
    common(sp)
    sp.add_argument(
        "--ensemble-out",
        default=None,
        help="also write the separable ensemble to this path (requires class 5)",
    )
    sp.set_defaults(func=cmd_witness)

    sp = sub.add_parser("threshold", help="noise threshold of the example family")
    common(sp, with_input=False)
    sp.add_argument("--n", type=int, required=True, help="number of qubits (>= 3)")
    sp.set_defaults(func=cmd_threshold)

    sp = sub.add_parser("selftest", help="seeded internal consistency checks")
    common(sp, with_input=False)
    sp.add_argument("--seed", type=int, default=12345)
    sp.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except StateFileError as exc:
        print(f"sepkit: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"sepkit: {exc}", file=sys.stderr)
        return EXIT_INPUT


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
