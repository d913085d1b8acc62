"""Experiment configs, batch runs and result serialization.

Config files are YAML (JSON is accepted too, being a YAML subset)::

    sample:                       # elements in the order light meets them
      - {type: hwp, theta_deg: 22.5}
      - {type: polarizer, theta: 0.3}
    scheme: all                   # oracle | conventional | two_dof_bench | all
    noise: {sigma_rel: 1.0e-3, dark: 0.0, photons: null}
    trials: 200
    seed: 12345
    render: {nx: 256, ny: 256, extent: 3.0, w0: 1.0}

A depolarizing sample replaces ``sample`` with ``ensemble``, either explicit::

    ensemble:
      weights: [0.5, 0.5]
      members:
        - [{type: identity}]
        - [{type: jones, matrix: [[1, 0], [0, -1]]}]

or Haar-random: ``ensemble: {haar: 100000}`` (drawn from the run seed).

Element types: ``identity``, ``hwp``, ``qwp``, ``rotator``, ``polarizer``
and ``jones``. Angles take exactly one of ``theta`` (radians) or
``theta_deg``. Jones entries are numbers, ``[re, im]`` pairs, or strings
such as ``"0.5-0.5j"``.

Composition order: ``sample: [a, b]`` has Jones matrix ``T = J_b @ J_a``.
"""

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .bench import DetectorMap, NoiseSpec, calibrate, full_bench, noisy_readout
from .elements import DepolarizingEnsemble, Element, compose
from .fields import Grid
from .polarimetry import (
    conventional_from_readings,
    conventional_readings,
    intensities_to_two_dof_stokes,
    mueller_depolarizing,
    mueller_from_jones,
    two_dof_reconstruct,
)
from .rng import make_rng

SCHEMES = ("oracle", "conventional", "two_dof_bench")
DEFAULT_SEED = 20140101

_TYPE_ALIASES = {
    "identity": "identity",
    "hwp": "HalfWaveConverter",
    "half_wave": "HalfWaveConverter",
    "halfwaveconverter": "HalfWaveConverter",
    "qwp": "QuarterWaveConverter",
    "quarter_wave": "QuarterWaveConverter",
    "quarterwaveconverter": "QuarterWaveConverter",
    "rotator": "Rotator",
    "polarizer": "Polarizer",
    "jones": "CustomJones",
    "customjones": "CustomJones",
}


class ParseError(ValueError):
    """Config text is not well-formed."""


class ValidationError(ValueError):
    """Config is well-formed but violates a constraint."""


@dataclass
class ExperimentConfig:
    sample: list = None  # list of Element, or None when ensemble is set
    ensemble: dict = None  # {"weights": [...], "members": [[Element, ...], ...]} or {"haar": n}
    scheme: str = "all"
    noise: NoiseSpec = None
    trials: int = 1
    seed: int = DEFAULT_SEED
    render: Grid = None
    source: dict = field(default_factory=dict, repr=False)

    @property
    def schemes(self):
        return SCHEMES if self.scheme == "all" else (self.scheme,)

    def canonical(self):
        """JSON-ready description of the effective config (used for hashing)."""
        out = dict(self.source)
        out["scheme"] = self.scheme
        out["trials"] = self.trials
        out["seed"] = self.seed
        return out

    def config_hash(self):
        blob = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"), default=str)
        return hashlib.sha256(blob.encode()).hexdigest()


def _complex(v, where):
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, str):
        try:
            return complex(v.replace(" ", ""))
        except ValueError:
            raise ValidationError(f"{where}: cannot read {v!r} as a complex number") from None
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    raise ValidationError(f"{where}: cannot read {v!r} as a complex number")


def _angle(spec, where):
    has_rad, has_deg = "theta" in spec, "theta_deg" in spec
    if has_rad and has_deg:
        raise ValidationError(f"{where}: give either theta or theta_deg, not both")
    try:
        if has_deg:
            return float(np.deg2rad(float(spec["theta_deg"])))
        if has_rad:
            return float(spec["theta"])
    except (TypeError, ValueError):
        raise ValidationError(f"{where}: angle must be a number") from None
    return 0.0


def parse_element(spec, where="sample[0]"):
    if not isinstance(spec, dict) or "type" not in spec:
        raise ValidationError(f"{where}: element needs a 'type' key")
    kind = _TYPE_ALIASES.get(str(spec["type"]).lower())
    if kind is None:
        raise ValidationError(f"{where}.type: unknown element type {spec['type']!r}")
    allowed = {"type", "theta", "theta_deg", "matrix"}
    extra = set(spec) - allowed
    if extra:
        raise ValidationError(f"{where}: unexpected keys {sorted(extra)}")
    if kind == "identity":
        return Element("CustomJones", custom=np.eye(2))
    theta = _angle(spec, where)
    if kind == "CustomJones":
        m = spec.get("matrix")
        if not isinstance(m, list) or len(m) != 2 or any(not isinstance(r, list) or len(r) != 2 for r in m):
            raise ValidationError(f"{where}.matrix: expected a 2x2 nested list")
        mat = np.array([[_complex(m[i][j], f"{where}.matrix[{i}][{j}]") for j in range(2)] for i in range(2)])
        return Element("CustomJones", custom=mat)
    return Element(kind, theta=theta)


def _element_list(v, where):
    if not isinstance(v, list) or not v:
        raise ValidationError(f"{where}: expected a nonempty list of elements")
    return [parse_element(s, f"{where}[{k}]") for k, s in enumerate(v)]


def _int(v, where, minimum=None):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ValidationError(f"{where}: expected an integer, got {v!r}")
    if minimum is not None and v < minimum:
        raise ValidationError(f"{where}: must be >= {minimum}")
    return v


def parse_config(text):
    """Parse and validate config text.

    Raises
    ------
    ParseError
        Malformed YAML/JSON (message carries line and column).
    ValidationError
        Bad field values; message names the field.
    """
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"line {mark.line + 1}, column {mark.column + 1}: " if mark else ""
        raise ParseError(f"{where}{getattr(exc, 'problem', None) or exc}") from None
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ParseError("config must be a key/value mapping at top level")

    known = {"sample", "ensemble", "scheme", "noise", "trials", "seed", "render"}
    extra = set(raw) - known
    if extra:
        raise ValidationError(f"unknown top-level keys {sorted(extra)}")

    cfg = ExperimentConfig(source=json.loads(json.dumps(raw, default=str)))
    if ("sample" in raw) == ("ensemble" in raw):
        raise ValidationError("give exactly one of 'sample' or 'ensemble'")
    if "sample" in raw:
        cfg.sample = _element_list(raw["sample"], "sample")
    else:
        ens = raw["ensemble"]
        if not isinstance(ens, dict):
            raise ValidationError("ensemble: expected a mapping")
        if "haar" in ens:
            cfg.ensemble = {"haar": _int(ens["haar"], "ensemble.haar", 1)}
        else:
            members = ens.get("members")
            weights = ens.get("weights")
            if not isinstance(members, list) or not members:
                raise ValidationError("ensemble.members: expected a nonempty list")
            if weights is None:
                weights = [1.0 / len(members)] * len(members)
            if not isinstance(weights, list) or len(weights) != len(members):
                raise ValidationError("ensemble.weights: need one weight per member")
            try:
                w = np.array([float(x) for x in weights])
            except (TypeError, ValueError):
                raise ValidationError("ensemble.weights: weights must be numbers") from None
            if np.any(w < 0):
                raise ValidationError("ensemble.weights: weights must be nonnegative")
            if abs(w.sum() - 1.0) > 1e-12:
                raise ValidationError(f"ensemble.weights: weights sum to {w.sum():g}, not 1")
            cfg.ensemble = {
                "weights": w,
                "members": [_element_list(m, f"ensemble.members[{k}]") for k, m in enumerate(members)],
            }

    scheme = raw.get("scheme", "all")
    if scheme not in SCHEMES + ("all",):
        raise ValidationError(f"scheme: must be one of {SCHEMES + ('all',)}, got {scheme!r}")
    cfg.scheme = scheme

    if raw.get("noise") is not None:
        n = raw["noise"]
        if not isinstance(n, dict):
            raise ValidationError("noise: expected a mapping")
        extra = set(n) - {"sigma_rel", "dark", "photons"}
        if extra:
            raise ValidationError(f"noise: unexpected keys {sorted(extra)}")
        try:
            cfg.noise = NoiseSpec(
                float(n.get("sigma_rel", 0.0)),
                float(n.get("dark", 0.0)),
                None if n.get("photons") is None else float(n["photons"]),
            )
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"noise: {exc}") from None

    cfg.trials = _int(raw.get("trials", 1), "trials", 1)
    cfg.seed = _int(raw.get("seed", DEFAULT_SEED), "seed", 0)
    if cfg.seed >= 1 << 64:
        raise ValidationError("seed: must fit in 64 bits")

    if raw.get("render") is not None:
        r = raw["render"]
        if not isinstance(r, dict):
            raise ValidationError("render: expected a mapping")
        try:
            cfg.render = Grid(
                int(r.get("nx", 256)), int(r.get("ny", 256)), float(r.get("extent", 3.0)), float(r.get("w0", 1.0))
            )
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"render: {exc}") from None
    return cfg


def load_config(path):
    return parse_config(Path(path).read_text())


def build_sample(cfg):
    """Jones matrix or :class:`DepolarizingEnsemble` described by ``cfg``."""
    if cfg.sample is not None:
        return compose(cfg.sample)
    if "haar" in cfg.ensemble:
        return DepolarizingEnsemble.haar(cfg.ensemble["haar"], make_rng(cfg.seed))
    jones = [compose(m) for m in cfg.ensemble["members"]]
    return DepolarizingEnsemble(cfg.ensemble["weights"], jones)


def _conventional_map(sample):
    """Sequential-scheme readings J[beta, alpha] packed as a detector map."""
    if isinstance(sample, DepolarizingEnsemble):
        j = sum(w * conventional_readings(t) for w, t in sample)
    else:
        j = conventional_readings(sample)
    return DetectorMap({(b, a): float(j[b, a]) for b in range(4) for a in range(4)}, {}, {})


def _from_conventional_map(d):
    return conventional_from_readings(d.matrix())


def _from_bench_map(d):
    return two_dof_reconstruct(intensities_to_two_dof_stokes(calibrate(d)))


def _errors(m_hat, m_true):
    diff = np.asarray(m_hat) - np.asarray(m_true)
    return {"max_abs": float(np.abs(diff).max()), "frobenius": float(np.linalg.norm(diff))}


def _stats(values):
    v = np.asarray(values, dtype=float)
    return {
        "median": float(np.median(v)),
        "p05": float(np.percentile(v, 5)),
        "p95": float(np.percentile(v, 95)),
    }


@dataclass
class ResultRecord:
    mueller_true: np.ndarray
    mueller_hat: dict
    errors: dict
    cross_scheme_discrepancy: float
    detectors: dict
    trial_stats: dict
    provenance: dict

    def to_dict(self):
        return {
            "mueller_true": np.asarray(self.mueller_true).tolist(),
            "mueller_hat": {k: np.asarray(v).tolist() for k, v in self.mueller_hat.items()},
            "errors": self.errors,
            "cross_scheme_discrepancy": self.cross_scheme_discrepancy,
            "detectors": self.detectors,
            "trial_stats": self.trial_stats,
            "seed": self.provenance["seed"],
            "provenance": self.provenance,
        }


def run(cfg):
    """Run every scheme requested by ``cfg`` and score it against the Jones oracle.

    Without noise each scheme is evaluated once. With noise, each of the
    ``cfg.trials`` trials draws fresh readout noise from its own random
    substream; ``mueller_hat`` is then the trial mean, and ``trial_stats``
    summarizes per-trial errors.
    """
    sample = build_sample(cfg)
    if isinstance(sample, DepolarizingEnsemble):
        m_true = mueller_depolarizing(sample)
    else:
        m_true = mueller_from_jones(sample)

    clean = {}
    if "conventional" in cfg.schemes:
        clean["conventional"] = _conventional_map(sample)
    if "two_dof_bench" in cfg.schemes:
        clean["two_dof_bench"] = full_bench(sample)
    decode = {"conventional": _from_conventional_map, "two_dof_bench": _from_bench_map}

    m_hat, errors, stats = {}, {}, {}
    noisy = cfg.noise is not None and not cfg.noise.is_null
    for scheme in cfg.schemes:
        if scheme == "oracle":
            m_hat[scheme] = m_true.copy()
        elif not noisy:
            m_hat[scheme] = decode[scheme](clean[scheme])
        else:
            estimates = []
            for k in range(cfg.trials):
                # streams 1.. for trials; stream 0 is reserved for sample generation
                rng = make_rng(cfg.seed, stream=1 + k + (0 if scheme == "two_dof_bench" else cfg.trials))
                estimates.append(decode[scheme](noisy_readout(clean[scheme], cfg.noise, rng)))
            estimates = np.array(estimates)
            m_hat[scheme] = estimates.mean(axis=0)
            per = [_errors(e, m_true) for e in estimates]
            stats[scheme] = {
                "frobenius": _stats([p["frobenius"] for p in per]),
                "max_abs": _stats([p["max_abs"] for p in per]),
            }
        errors[scheme] = _errors(m_hat[scheme], m_true)

    hats = list(m_hat.values())
    disc = max((float(np.abs(a - b).max()) for a in hats for b in hats), default=0.0)
    detectors = {"two_dof_bench": clean["two_dof_bench"].to_dict()} if "two_dof_bench" in clean else {}
    provenance = {"config_hash": cfg.config_hash(), "seed": cfg.seed, "version": __version__}
    return ResultRecord(m_true, m_hat, errors, disc, detectors, stats, provenance)


def _matrix_cols(prefix=""):
    return [f"{prefix}m{i}{j}" for i in range(4) for j in range(4)]


def results_to_csv(r):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["record"] + _matrix_cols() + [
        "max_abs", "frobenius", "frob_median", "frob_p05", "frob_p95", "config_hash", "seed",
    ]
    w.writerow(header)
    rows = [("true", r.mueller_true, {"max_abs": 0.0, "frobenius": 0.0}, {})]
    for k in r.mueller_hat:
        rows.append((k, r.mueller_hat[k], r.errors[k], r.trial_stats.get(k, {}).get("frobenius", {})))
    for name, m, err, st in rows:
        w.writerow(
            [name]
            + [repr(float(v)) for v in np.asarray(m).ravel()]
            + [repr(err["max_abs"]), repr(err["frobenius"])]
            + [repr(st[q]) if q in st else "" for q in ("median", "p05", "p95")]
            + [r.provenance["config_hash"], r.provenance["seed"]]
        )
    return buf.getvalue()


def emit_results(r, path, format="json"):
    """Write ``r`` as JSON (sorted keys) or as a flat CSV table."""
    if format == "json":
        text = json.dumps(r.to_dict(), sort_keys=True, indent=2) + "\n"
    elif format == "csv":
        text = results_to_csv(r)
    else:
        raise ValueError(f"unknown result format {format!r}")
    path = Path(path)
    path.write_text(text)
    return path


def sweep(cfg, sigmas):
    """Median/percentile errors over a grid of relative readout noise levels."""
    base = cfg.noise or NoiseSpec()
    rows = []
    for s in sigmas:
        sub = ExperimentConfig(**{**cfg.__dict__})
        sub.noise = NoiseSpec(float(s), base.dark, base.photons)
        sub.source = {**cfg.source, "noise": {"sigma_rel": float(s), "dark": base.dark, "photons": base.photons}}
        r = run(sub)
        for scheme, st in r.trial_stats.items():
            rows.append({"sigma_rel": float(s), "scheme": scheme, **{f"frob_{k}": v for k, v in st["frobenius"].items()}})
    return rows
