"""Command-line front end: ingest states, run certificates and sweeps,
export witnesses and reports.

Exit codes: 0 = separability condition satisfied (no certificate),
2 = violation certified, 1 = error, 3 = unreliable Fock truncation.
The default margin tolerance can be overridden with NPT_CERTIFY_TOL.
"""

from __future__ import annotations

import json
import os
import sys

import click
import numpy as np

from . import certificates, cv, states
from .errors import CertificationError, ParameterOutOfRange, TruncationUnreliable
from .hermitian import Bipartition, matrix_payload, operator_from_payload

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VIOLATED = 2
EXIT_TRUNCATION = 3


def _default_tol() -> float:
    return float(os.environ.get("NPT_CERTIFY_TOL", certificates.VIOLATION_TOL))


def _parse_value(text: str):
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            continue
    try:
        return complex(text)
    except ValueError:
        return text


def _parse_spec(text: str) -> dict:
    """Accept a JSON object or the compact form "family:key=val,key=val"."""
    text = text.strip()
    if text.startswith("{"):
        return json.loads(text)
    family, _, rest = text.partition(":")
    spec = {"family": family.strip()}
    if rest.strip():
        for item in rest.split(","):
            key, _, value = item.partition("=")
            if not _:
                raise ParameterOutOfRange(f"cannot parse spec item {item!r}")
            spec[key.strip()] = _parse_value(value.strip())
    return spec


def _load_finite_state(source: str, seed=None):
    """State from a matrix/spec file, an inline JSON object, or a compact spec."""
    if os.path.exists(source):
        with open(source) as fh:
            payload = json.load(fh)
    else:
        payload = _parse_spec(source)
    if "matrix" in payload:
        return operator_from_payload(payload)
    if seed is not None and "seed" not in payload:
        payload["seed"] = seed
    return states.state_from_spec(payload)


def _load_cv_state(source: str, cutoff: int):
    if os.path.exists(source):
        with open(source) as fh:
            payload = json.load(fh)
    else:
        payload = _parse_spec(source)
    payload.setdefault("cutoff", cutoff)
    return cv.cv_state_from_spec(payload), payload


def _emit(payload: dict, out) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        click.echo(text)


def _fail(exc: Exception) -> int:
    click.echo(f"error: {exc}", err=True)
    if isinstance(exc, TruncationUnreliable):
        return EXIT_TRUNCATION
    return EXIT_ERROR


@click.group()
def main():
    """Certify entanglement of NPT states through uncertainty relations."""


@main.command()
@click.argument("source")
@click.option("--bipartition", required=True, help='Subsystem split, e.g. "0,1|2".')
@click.option("--tol", type=float, default=None, help="Margin tolerance.")
@click.option("--seed", type=int, default=None, help="Seed for random state specs.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def check(source, bipartition, tol, seed, out):
    """Run the full SR certificate for one state and bipartition."""
    tol = _default_tol() if tol is None else tol
    try:
        rho = _load_finite_state(source, seed)
        bip = Bipartition.parse(bipartition, len(rho.dims))
        payload = certificates.certificate_payload(rho, bip, tol=tol)
    except (CertificationError, json.JSONDecodeError, OSError, KeyError, ValueError) as exc:
        sys.exit(_fail(exc))
    payload["config"] = {
        "command": "check", "input": source, "bipartition": bipartition,
        "tol": tol, "seed": seed,
    }
    _emit(payload, out)
    sys.exit(EXIT_VIOLATED if payload["verdict"] == "violated" else EXIT_OK)


@main.command("sweep-ghz")
@click.option("--p-from", type=float, default=0.0, show_default=True)
@click.option("--p-to", type=float, default=1.0, show_default=True)
@click.option("--steps", type=int, default=21, show_default=True)
@click.option("--bipartition", default="0,1|2", show_default=True)
@click.option("--tol", type=float, default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def sweep_ghz(p_from, p_to, steps, bipartition, tol, out):
    """Sweep the mixed-GHZ family and emit CSV columns
    p, lambda_minus, sr_margin, eq8_margin, witness_value."""
    tol = _default_tol() if tol is None else tol
    try:
        if not (0.0 <= p_from < p_to <= 1.0):
            raise ParameterOutOfRange(
                f"need 0 <= p_from < p_to <= 1, got {p_from}, {p_to}"
            )
        if steps < 2:
            raise ParameterOutOfRange(f"steps = {steps} must be >= 2")
        bip_probe = Bipartition.parse(bipartition, 3)
        rows = []
        for p in np.linspace(p_from, p_to, steps):
            rho = states.make_ghz_mixed(float(p))
            verdict, pair, rep = certificates.sr_pt_test(rho, bip_probe, tol=tol)
            eq8 = certificates.ghz_inequality(*certificates.ghz_correlators(rho))
            # PT of the minimal-eigenvalue projector, traced against rho;
            # equals lambda_min whatever its sign.
            spectrum, _ = certificates.classify_npt(rho, bip_probe, tol=tol)
            proj = certificates.projector(
                spectrum.vector(verdict.chosen_negative_index), rho.dims
            )
            wval = certificates.expectation(
                certificates.pt_of_operator(proj, bip_probe), rho
            )
            rows.append((float(p), verdict.min_eigenvalue, rep.margin, eq8.margin, wval))
    except CertificationError as exc:
        sys.exit(_fail(exc))
    lines = ["p,lambda_minus,sr_margin,eq8_margin,witness_value"]
    lines += [",".join(repr(x) for x in row) for row in rows]
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)
    sys.exit(EXIT_OK)


@main.command()
@click.argument("source")
@click.option("--bipartition", required=True)
@click.option("--tol", type=float, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def witness(source, bipartition, tol, seed, out):
    """Export the entanglement witness built from the most negative PT eigenvector."""
    tol = _default_tol() if tol is None else tol
    try:
        rho = _load_finite_state(source, seed)
        bip = Bipartition.parse(bipartition, len(rho.dims))
        spectrum, verdict = certificates.classify_npt(rho, bip, tol=tol)
        entry = None
        if verdict.is_npt:
            lam2 = float(spectrum.eigenvalues[verdict.chosen_negative_index])
            wit = certificates.witness_from_eigvec(
                spectrum.vector(verdict.chosen_negative_index), lam2, bip, rho.dims
            )
            entry = {
                "matrix": matrix_payload(wit.w),
                "trace_value": certificates.witness_value(wit, rho),
                "source_eigenvalue": lam2,
            }
    except (CertificationError, json.JSONDecodeError, OSError, KeyError, ValueError) as exc:
        sys.exit(_fail(exc))
    payload = {
        "is_npt": verdict.is_npt,
        "pt_eigenvalues": [float(x) for x in spectrum.eigenvalues],
        "witness": entry,
        "config": {"command": "witness", "input": source,
                   "bipartition": bipartition, "tol": tol, "seed": seed},
    }
    _emit(payload, out)
    sys.exit(EXIT_VIOLATED if verdict.is_npt else EXIT_OK)


def _cv_report_payload(rep: cv.CvInequalityReport) -> dict:
    return {
        "inequality": rep.inequality,
        "m": rep.m,
        "n": rep.n,
        "lhs": rep.lhs,
        "rhs": rep.rhs,
        "margin": rep.margin,
        "hur_variant_margin": rep.hur_variant_margin,
        "sum_hur_margin": rep.sum_hur_margin,
        "violated": rep.violated,
        "verdict": "violated" if rep.violated else "satisfied",
        "truncation": {
            "tail_weight": rep.diagnostics.tail_weight,
            "reliable": rep.diagnostics.reliable,
        },
    }


def _check_orders(*orders) -> None:
    for o in orders:
        if not 1 <= o <= 4:
            raise ParameterOutOfRange(f"order {o} outside 1..4")


@main.command("cv-check")
@click.argument("source")
@click.option("--ineq", type=click.Choice(["10", "11"]), default="10", show_default=True)
@click.option("--m", type=int, default=1, show_default=True)
@click.option("--n", type=int, default=1, show_default=True)
@click.option("--cutoff", type=int, default=cv.DEFAULT_CUTOFF, show_default=True)
@click.option("--tol", type=float, default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def cv_check(source, ineq, m, n, cutoff, tol, out):
    """Evaluate a moment inequality for a two-mode CV state spec."""
    tol = _default_tol() if tol is None else tol
    try:
        _check_orders(m, n)
        rho, spec = _load_cv_state(source, cutoff)
        runner = cv.ineq10 if ineq == "10" else cv.ineq11
        rep = runner(rho, m, n, tol=tol)
    except (CertificationError, json.JSONDecodeError, OSError, KeyError, ValueError) as exc:
        sys.exit(_fail(exc))
    payload = _cv_report_payload(rep)
    payload["config"] = {"command": "cv-check", "input": source, "spec": spec,
                         "ineq": ineq, "m": m, "n": n, "cutoff": cutoff, "tol": tol}
    _emit(payload, out)
    sys.exit(EXIT_VIOLATED if rep.violated else EXIT_OK)


@main.command("bs-demo")
@click.option("--input", "source", required=True,
              help='Single-mode spec, e.g. "squeezed_vacuum:r=0.5".')
@click.option("--theta", type=float, default=float(np.pi / 4), show_default=True)
@click.option("--m", type=int, default=1, show_default=True)
@click.option("--n", type=int, default=1, show_default=True)
@click.option("--cutoff", type=int, default=cv.DEFAULT_CUTOFF, show_default=True)
@click.option("--tol", type=float, default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def bs_demo(source, theta, m, n, cutoff, tol, out):
    """Pipe a single-mode state and vacuum through a beam splitter, then
    evaluate both moment inequalities on the output."""
    tol = _default_tol() if tol is None else tol
    try:
        _check_orders(m, n)
        rho_in, spec = _load_cv_state(source, cutoff)
        two_mode = cv.with_vacuum_ancilla(rho_in)
        result = cv.beam_splitter(two_mode, theta)
        rep10 = cv.ineq10(result.state, m, n, tol=tol)
        rep11 = cv.ineq11(result.state, m, n, tol=tol)
    except (CertificationError, json.JSONDecodeError, OSError, KeyError, ValueError) as exc:
        sys.exit(_fail(exc))
    payload = {
        "unitarity_defect": result.unitarity_defect,
        "ineq10": _cv_report_payload(rep10),
        "ineq11": _cv_report_payload(rep11),
        "config": {"command": "bs-demo", "input": source, "spec": spec,
                   "theta": theta, "m": m, "n": n, "cutoff": cutoff, "tol": tol},
    }
    _emit(payload, out)
    violated = rep10.violated or rep11.violated
    sys.exit(EXIT_VIOLATED if violated else EXIT_OK)


@main.command("relation-check")
@click.argument("source")
@click.option("--m", type=int, default=1, show_default=True)
@click.option("--n", type=int, default=1, show_default=True)
@click.option("--p", type=int, default=1, show_default=True)
@click.option("--q", type=int, default=0, show_default=True)
@click.option("--cutoff", type=int, default=cv.DEFAULT_CUTOFF, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def relation_check(source, m, n, p, q, cutoff, out):
    """Check the partial-transpose moment identity on a two-mode state."""
    try:
        for o in (m, n, p, q):
            if not 0 <= o <= 4:
                raise ParameterOutOfRange(f"order {o} outside 0..4")
        rho, spec = _load_cv_state(source, cutoff)
        res = cv.pt_moment_relation_check(rho, m, n, p, q)
    except (CertificationError, json.JSONDecodeError, OSError, KeyError, ValueError) as exc:
        sys.exit(_fail(exc))
    payload = {
        "lhs": [res.lhs.real, res.lhs.imag],
        "rhs": [res.rhs.real, res.rhs.imag],
        "defect": res.defect,
        "config": {"command": "relation-check", "input": source, "spec": spec,
                   "m": m, "n": n, "p": p, "q": q, "cutoff": cutoff},
    }
    _emit(payload, out)
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
