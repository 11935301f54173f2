"""Reproducible experiment driver.

Configs are flat ``key = value`` text files with a typed schema per
command; unknown keys are rejected.  Reports embed the resolved config and
the artifact version and are byte-identical for a fixed (config, seed).

Exit codes: 0 success, 2 config error, 3 I/O error.

Commands
--------
rnmp-bound      norm multiplicativity constants for (s, f, n)
embed-verify    Monte Carlo distortion of an ensemble on B(M_{s,f})
recover-sweep   planted-recovery success rate over a measurement sweep
phase-stability empirical phase-retrieval stability constant
freiman-search  minimal-diameter isomorphic image of an index set
demod-selftest  adjoint/unitarity/FFT-consistency checks
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, embedding, freiman, phase, recovery, rnmp
from . import operators

COMMANDS = ("rnmp-bound", "embed-verify", "recover-sweep",
            "phase-stability", "freiman-search", "demod-selftest")


class ConfigError(ValueError):
    pass


def _parse_int_list(text: str):
    try:
        return [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"bad integer list {text!r}") from exc


# command -> {key: (type converter, default or REQUIRED)}
_REQUIRED = object()

SCHEMAS = {
    "rnmp-bound": {
        "s": (int, _REQUIRED),
        "f": (int, _REQUIRED),
        "n": (int, _REQUIRED),
        "trials": (int, 32),
        "det_budget": (int, 8),
        "seed": (int, 0),
    },
    "embed-verify": {
        "ensemble": (str, "gaussian"),
        "m": (int, _REQUIRED),
        "n": (int, _REQUIRED),
        "s": (int, 2),
        "f": (int, 2),
        "trials": (int, 200),
        "delta": (float, 0.5),
        "seed": (int, 0),
    },
    "recover-sweep": {
        "n": (int, 100),
        "sparsity": (int, 3),
        "m_values": (_parse_int_list, _REQUIRED),
        "trials": (int, 20),
        "noise": (float, 0.0),
        "seed": (int, 0),
    },
    "phase-stability": {
        "n": (int, _REQUIRED),
        "trials": (int, 1000),
        "variant": (str, phase.VARIANT_S),
        "seed": (int, 0),
    },
    "freiman-search": {
        "set": (_parse_int_list, _REQUIRED),
        "budget": (int, 10 ** 6),
        "seed": (int, 0),
    },
    "demod-selftest": {
        "n": (int, 16),
        "m": (int, 0),  # 0 means n // 2 + 1
        "seed": (int, 0),
    },
}


def parse_config(path: Path) -> dict:
    raw = {}
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, _, value = stripped.partition("=")
        raw[key.strip()] = value.strip()
    command = raw.pop("command", None)
    if command not in COMMANDS:
        raise ConfigError(f"config must set command to one of {COMMANDS}")
    schema = SCHEMAS[command]
    unknown = set(raw) - set(schema)
    if unknown:
        raise ConfigError(f"unknown keys: {sorted(unknown)}")
    config = {"command": command}
    for key, (conv, default) in schema.items():
        if key in raw:
            try:
                config[key] = conv(raw[key])
            except (ValueError, ConfigError) as exc:
                raise ConfigError(f"bad value for {key}: {exc}") from exc
        elif default is _REQUIRED:
            raise ConfigError(f"missing required key {key!r}")
        else:
            config[key] = default
    return config


def _json_bytes(payload: dict) -> bytes:
    return (json.dumps(payload, sort_keys=True, indent=2) + "\n").encode()


def _echo(config: dict) -> dict:
    echo = dict(config)
    if "set" in echo:
        echo["set"] = list(echo["set"])
    if "m_values" in echo:
        echo["m_values"] = list(echo["m_values"])
    return echo


def _run_rnmp_bound(config: dict, out: Path, fmt: str):
    bounds = rnmp.compute_bounds(config["s"], config["f"], config["n"],
                                 trials=config["trials"],
                                 seed=config["seed"],
                                 det_budget=config["det_budget"])
    row = {
        "s": bounds.s, "f": bounds.f, "n": config["n"],
        "n_effective": bounds.n_effective,
        "alpha_lower": bounds.alpha_lower,
        "alpha_empirical": bounds.alpha_empirical,
        "beta": bounds.beta,
    }
    if fmt == "csv":
        lines = [",".join(row), ",".join(repr(v) for v in row.values())]
        (out / "rnmp-bound.csv").write_bytes(("\n".join(lines) + "\n").encode())
    payload = {"artifact_version": __version__, "config": _echo(config),
               "result": row, "certificates": bounds.certificates}
    (out / "rnmp-bound.json").write_bytes(_json_bytes(payload))
    return 0


def _make_operator(kind: str, m: int, n: int, seed: int):
    if kind == "identity":
        return operators.identity_operator(n)
    if kind == "gaussian":
        return operators.gaussian_operator(m, n, seed)
    if kind == "demodulator":
        return operators.universal_random_demodulator(
            m, n, seed_eta=seed + 1, seed_xi=seed + 2, omega=seed + 3)
    raise ConfigError(f"unknown ensemble {kind!r}")


def _run_embed_verify(config: dict, out: Path, fmt: str):
    n = config["n"]
    m = n if config["ensemble"] == "identity" else config["m"]
    phi = _make_operator(config["ensemble"], m, n, config["seed"])
    bmap = operators.convolution_lift(n)
    spec = embedding.StructuredSetSpec("sparse_rank_one", n, n,
                                       config["s"], config["f"])
    report = embedding.verify_embedding(phi, bmap, spec, config["trials"],
                                        config["seed"])
    if fmt == "csv":
        rows = "\n".join(report.to_csv_rows()) + "\n"
        (out / "embed-verify-trials.csv").write_bytes(rows.encode())
    payload = {"artifact_version": __version__, "config": _echo(config),
               "summary": report.summary(),
               "delta_target": config["delta"],
               "within_target": bool(report.delta_hat <= config["delta"])}
    (out / "embed-verify.json").write_bytes(_json_bytes(payload))
    return 0


def _run_recover_sweep(config: dict, out: Path, fmt: str):
    n = config["n"]
    s = config["sparsity"]
    rows = []
    seq = np.random.SeedSequence(config["seed"])
    for m, child in zip(config["m_values"],
                        seq.spawn(len(config["m_values"]))):
        successes = 0
        for trial_seed in child.spawn(config["trials"]):
            rng = np.random.default_rng(trial_seed)
            a = (rng.standard_normal((m, n))
                 + 1j * rng.standard_normal((m, n))) / np.sqrt(2 * m)
            support = rng.choice(n, size=s, replace=False)
            u0 = np.zeros(n, dtype=complex)
            u0[support] = rng.standard_normal(s) + 1j * rng.standard_normal(s)
            b = a @ u0
            eps = 0.0
            if config["noise"] > 0:
                e = rng.standard_normal(m) + 1j * rng.standard_normal(m)
                e *= config["noise"] / np.linalg.norm(e)
                b = b + e
                eps = config["noise"]
            result = recovery.bpdn_synthesis(a, b, eps=eps)
            err = np.linalg.norm(result.solution - u0) / np.linalg.norm(u0)
            if err <= 1e-3:
                successes += 1
        rows.append({"m": m, "success_rate": successes / config["trials"],
                     "trials": config["trials"], "seed": config["seed"]})
    if fmt == "csv":
        lines = ["m,success_rate,trials,seed"]
        lines += ["{},{!r},{},{}".format(r["m"], r["success_rate"],
                                         r["trials"], r["seed"])
                  for r in rows]
        (out / "recover-sweep.csv").write_bytes(("\n".join(lines) + "\n").encode())
    payload = {"artifact_version": __version__, "config": _echo(config),
               "sweep": rows}
    (out / "recover-sweep.json").write_bytes(_json_bytes(payload))
    return 0


def _run_phase_stability(config: dict, out: Path, fmt: str):
    est = phase.stability_constant_estimate(config["n"], config["trials"],
                                            seed=config["seed"],
                                            variant=config["variant"])
    payload = {"artifact_version": __version__, "config": _echo(config),
               "c_hat": est.c_hat,
               "positive": bool(est.c_hat > 1e-8),
               "worst_pair": est.worst_pair_json()}
    (out / "phase-stability.json").write_bytes(_json_bytes(payload))
    return 0


def _run_freiman_search(config: dict, out: Path, fmt: str):
    result = freiman.min_diameter_isomorphic_image(config["set"],
                                                   budget=config["budget"])
    bound = freiman.grynkiewicz_bound(len(result.source))
    payload = {"artifact_version": __version__, "config": _echo(config),
               "result": result.to_json(),
               "grynkiewicz_bound": bound,
               "within_bound": bool(result.diameter <= bound)}
    (out / "freiman-search.json").write_bytes(_json_bytes(payload))
    return 0


def _run_demod_selftest(config: dict, out: Path, fmt: str):
    n = config["n"]
    m = config["m"] or n // 2 + 1
    seed = config["seed"]
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    op = operators.universal_random_demodulator(m, n, seed_eta=seed + 1,
                                                seed_xi=seed + 2,
                                                omega=seed + 3)
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    w = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    adjoint_err = abs(np.vdot(w, op.apply(x)) - np.vdot(op.adjoint(w), x))
    adjoint_err /= np.linalg.norm(x) * np.linalg.norm(w)
    dense = op.materialize()
    dense_err = float(np.linalg.norm(dense @ x - op.apply(x))
                      / np.linalg.norm(x))
    signs = operators.sign_diagonal(n, seed + 2)
    unitary_err = abs(np.linalg.norm(signs.apply(x)) - np.linalg.norm(x))
    rebuilt = operators.operator_from_descriptor(op.descriptor)
    determinism_ok = bool(np.array_equal(rebuilt.apply(x), op.apply(x)))
    checks = {
        "adjoint_relative_error": float(adjoint_err),
        "adjoint_ok": bool(adjoint_err < 1e-10),
        "fft_vs_dense_error": dense_err,
        "fft_vs_dense_ok": bool(dense_err < 1e-10),
        "sign_diagonal_unitary_error": float(unitary_err),
        "sign_diagonal_unitary_ok": bool(unitary_err < 1e-12),
        "descriptor_determinism_ok": determinism_ok,
    }
    all_ok = all(v for k, v in checks.items() if k.endswith("_ok"))
    payload = {"artifact_version": __version__, "config": _echo(config),
               "checks": checks, "all_ok": bool(all_ok)}
    (out / "demod-selftest.json").write_bytes(_json_bytes(payload))
    return 0 if all_ok else 1


_RUNNERS = {
    "rnmp-bound": _run_rnmp_bound,
    "embed-verify": _run_embed_verify,
    "recover-sweep": _run_recover_sweep,
    "phase-stability": _run_phase_stability,
    "freiman-search": _run_freiman_search,
    "demod-selftest": _run_demod_selftest,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="bilinlab",
        description="Reproducible experiments for sparse bilinear "
                    "inverse problems")
    parser.add_argument("--config", required=True, help="key = value file")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the config seed")
    parser.add_argument("--out", default=".", help="report directory")
    parser.add_argument("--format", choices=("csv", "json"), default="json")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker hint; results are identical for any "
                             "value (seed splits are worker independent)")
    args = parser.parse_args(argv)
    try:
        config = parse_config(Path(args.config))
        if args.seed is not None:
            config["seed"] = args.seed
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        if not out.is_dir():
            raise OSError("not a directory")
        return _RUNNERS[config["command"]](config, out, args.format)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
