"""Command-line interface.

Subcommands: ``score``, ``rerank``, ``gram``, ``study`` and ``gen``. Results
go to standard output (or ``--out``) as JSON, diagnostics to standard error.

Exit codes: 0 success, 2 usage or input-reference error, 3 parse error,
4 numeric or degenerate-input error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import __version__
from .baselines import cosine_meanpool, dtw, exact_wasserstein, soft_dtw
from .core import DegenerateInputError, EmbeddingSequence, InvalidArgumentError
from .kernels import DEFAULT_GAMMA, DEFAULT_PROJECTIONS, KernelConfig, gram, sw_hat, sw_rbf_hat, usw_rbf_hat
from .positional import MODES, PositionalConfig, augment, temporal_projection_set, temporal_score
from .rerank import DEFAULT_ALPHA, Candidate, CandidateSet, rerank_cosine, rerank_usw
from .studies import (
    DEFAULT_GAMMA_GRID,
    DEFAULT_L_GRID,
    RATE_L_GRID,
    REFERENCE_L,
    StudyConfig,
    ablation_study,
    gen_synthetic,
    psd_study,
    rate_study,
    unbiasedness_study,
)

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_NUMERIC = 0, 2, 3, 4
SEED_ENV = "SWKERNEL_SEED"
METRICS = ("usw", "sw-rbf", "sw", "dtw", "sdtw", "wasserstein", "cosine")
STUDIES = ("unbiasedness", "rate", "psd", "ablation")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# -- JSON output ---------------------------------------------------------

def _format_float(v: float) -> str:
    if not math.isfinite(v):
        raise CliError(EXIT_NUMERIC, f"non-finite value in output: {v}")
    text = format(v, ".17g")
    if not any(ch in text for ch in ".en"):
        text += ".0"
    return text


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj) -> str:
    """Deterministic JSON with floats rendered to 17 significant digits."""
    return _encode(obj, 2, 0) + "\n"


def _emit(obj, out_path=None):
    text = dumps(obj)
    if out_path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(out_path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".swkernel-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, out_path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- document parsing ----------------------------------------------------

def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(EXIT_USAGE, f"cannot read {path}: {exc}") from exc
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CliError(EXIT_PARSE, f"malformed JSON in {path}: {exc}") from exc


def _vectors(raw, dim, where):
    if not isinstance(raw, list) or not raw:
        raise CliError(EXIT_PARSE, f"{where}: vectors must be a non-empty list")
    for row in raw:
        if not isinstance(row, list) or (dim is not None and len(row) != dim):
            raise CliError(EXIT_PARSE, f"{where}: every vector must be a list of length {dim}")
        if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in row):
            raise CliError(EXIT_PARSE, f"{where}: vector entries must be numbers")
    try:
        return EmbeddingSequence(raw)
    except InvalidArgumentError as exc:
        raise CliError(EXIT_PARSE, f"{where}: {exc}") from exc


def load_sequence_document(path) -> dict:
    """Read ``{"dim": d, "sequences": [{"id": ..., "vectors": [[...], ...]}, ...]}``."""
    doc = _load_json(path)
    if not isinstance(doc, dict) or "sequences" not in doc or "dim" not in doc:
        raise CliError(EXIT_PARSE, "sequence document needs 'dim' and 'sequences'")
    dim = doc["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise CliError(EXIT_PARSE, "'dim' must be a positive integer")
    out = {}
    for i, entry in enumerate(doc["sequences"]):
        if not isinstance(entry, dict) or not isinstance(entry.get("id"), str):
            raise CliError(EXIT_PARSE, f"sequence #{i} needs a string 'id'")
        if entry["id"] in out:
            raise CliError(EXIT_PARSE, f"duplicate sequence id {entry['id']!r}")
        out[entry["id"]] = _vectors(entry.get("vectors"), dim, f"sequence {entry['id']!r}")
    return out


def load_rerank_document(path) -> CandidateSet:
    """Read ``{"anchor": [[...]], "candidates": [{"id", "vectors", "likelihood"}], "alpha": a}``."""
    doc = _load_json(path)
    if not isinstance(doc, dict) or "anchor" not in doc or "candidates" not in doc:
        raise CliError(EXIT_PARSE, "rerank document needs 'anchor' and 'candidates'")
    anchor = _vectors(doc["anchor"], None, "anchor")
    cands = []
    if not isinstance(doc["candidates"], list):
        raise CliError(EXIT_PARSE, "'candidates' must be a list")
    for i, entry in enumerate(doc["candidates"]):
        if not isinstance(entry, dict) or not isinstance(entry.get("id"), str):
            raise CliError(EXIT_PARSE, f"candidate #{i} needs a string 'id'")
        lik = entry.get("likelihood")
        if not isinstance(lik, (int, float)) or isinstance(lik, bool):
            raise CliError(EXIT_PARSE, f"candidate {entry['id']!r} needs a numeric 'likelihood'")
        seq = _vectors(entry.get("vectors"), anchor.dim, f"candidate {entry['id']!r}")
        cands.append(Candidate(entry["id"], seq, float(lik)))
    alpha = doc.get("alpha", DEFAULT_ALPHA)
    if not isinstance(alpha, (int, float)) or isinstance(alpha, bool):
        raise CliError(EXIT_PARSE, "'alpha' must be a number")
    try:
        return CandidateSet(anchor, cands, float(alpha))
    except InvalidArgumentError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from exc


# -- argument helpers ----------------------------------------------------

def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise CliError(EXIT_USAGE, f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _csv(kind):
    def parse(text):
        try:
            values = [kind(v) for v in text.split(",") if v.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected comma-separated {kind.__name__} values") from None
        if not values:
            raise argparse.ArgumentTypeError("empty list")
        return values
    return parse


def _kernel_args(p, gamma_default=DEFAULT_GAMMA):
    p.add_argument("--gamma", type=float, default=gamma_default, help="RBF bandwidth")
    p.add_argument("--p", type=float, default=2.0, help="cost order (>= 1)")
    p.add_argument("--proj", type=int, default=DEFAULT_PROJECTIONS, help="number of projections L")
    p.add_argument("--seed", type=int, default=None, help=f"projection seed (default ${SEED_ENV} or 0)")


def _pe_args(p, default_mode):
    p.add_argument("--pe", choices=MODES, default=default_mode, help="positional encoding")
    p.add_argument("--pe-dim", type=int, default=None, help="encoding dimension k (even)")
    p.add_argument("--pe-beta", type=float, default=1.0, help="position weight")
    p.add_argument("--pe-raw-positions", action="store_true",
                   help="use raw indices instead of length-normalised positions")


def _kernel_config(args, seed) -> KernelConfig:
    return KernelConfig(gamma=args.gamma, p=args.p, projections=args.proj, seed=seed)


def _pe_config(args) -> PositionalConfig:
    return PositionalConfig(mode=args.pe, k=args.pe_dim, beta=args.pe_beta,
                            normalize_positions=not args.pe_raw_positions)


# -- commands ------------------------------------------------------------

def cmd_score(args) -> dict:
    seqs = load_sequence_document(args.document)
    for sid in (args.id_x, args.id_y):
        if sid not in seqs:
            raise CliError(EXIT_USAGE, f"unknown sequence id {sid!r}")
    x, y = seqs[args.id_x], seqs[args.id_y]
    seed = args.seed if args.seed is not None else _default_seed()
    kcfg = _kernel_config(args, seed)
    pcfg = _pe_config(args)
    config = {"ids": [args.id_x, args.id_y]}
    metric = args.metric
    if metric in ("usw", "sw-rbf", "sw", "wasserstein"):
        uses_pe = pcfg.mode != "none"
        config.update(pe=pcfg.mode, pe_dim=pcfg.resolved_k(x.dim) if uses_pe else None,
                      pe_beta=pcfg.beta, normalize_positions=pcfg.normalize_positions)
        if metric == "usw" and uses_pe:
            value = temporal_score(x, y, kcfg, pcfg)
            config.update(gamma=kcfg.gamma, p=2.0, projections=kcfg.projections, seed=seed)
        else:
            if uses_pe:
                x, y = augment(x, pcfg), augment(y, pcfg)
            if metric == "wasserstein":
                value = exact_wasserstein(x, y)
            else:
                proj = temporal_projection_set(seqs[args.id_x].dim, kcfg, pcfg)
                config.update(p=kcfg.p, projections=kcfg.projections, seed=seed)
                if metric == "sw":
                    value = sw_hat(x, y, kcfg.p, proj)
                else:
                    config["gamma"] = kcfg.gamma
                    fn = usw_rbf_hat if metric == "usw" else sw_rbf_hat
                    value = fn(x, y, kcfg, proj)
    elif metric == "dtw":
        value = dtw(x, y)
    elif metric == "sdtw":
        value = soft_dtw(x, y, args.gamma_s)
        config["gamma_s"] = args.gamma_s
    else:
        value = cosine_meanpool(x, y)
    return {"metric": metric, "value": value, "config": config}


def cmd_rerank(args) -> dict:
    cset = load_rerank_document(args.document)
    alpha = cset.alpha if args.alpha is None else args.alpha
    if args.rule == "cosine":
        report = rerank_cosine(cset)
    else:
        seed = args.seed if args.seed is not None else _default_seed()
        report = rerank_usw(cset, _kernel_config(args, seed), _pe_config(args), alpha=alpha)
    return report.to_dict()


def cmd_gram(args) -> dict:
    seqs = load_sequence_document(args.document)
    if not seqs:
        raise CliError(EXIT_PARSE, "sequence document has no sequences")
    seed = args.seed if args.seed is not None else _default_seed()
    kcfg = _kernel_config(args, seed)
    g = gram(list(seqs.values()), kcfg, labels=list(seqs))
    return {
        "ids": list(g.labels),
        "matrix": g.entries,
        "min_eigenvalue": g.min_eigenvalue,
        "config": {"gamma": kcfg.gamma, "p": kcfg.p, "projections": kcfg.projections, "seed": seed},
    }


_STUDY_DEFAULTS = {
    "unbiasedness": dict(replicates=2000, L_grid=(1,), gamma_grid=(1.0,), d=8),
    "rate": dict(replicates=200, L_grid=RATE_L_GRID, gamma_grid=(1.0,), d=8),
    "psd": dict(replicates=2, L_grid=(512,), gamma_grid=(0.5, 2.5), d=3),
    "ablation": dict(replicates=20, L_grid=DEFAULT_L_GRID, gamma_grid=DEFAULT_GAMMA_GRID, d=8),
}


def cmd_study(args) -> dict:
    defaults = _STUDY_DEFAULTS[args.study]
    seed = args.seed if args.seed is not None else _default_seed()
    cfg = StudyConfig(
        replicates=args.replicates if args.replicates is not None else defaults["replicates"],
        L_grid=args.L_grid if args.L_grid is not None else defaults["L_grid"],
        gamma_grid=args.gamma_grid if args.gamma_grid is not None else defaults["gamma_grid"],
        seed=seed,
        d=args.d if args.d is not None else defaults["d"],
        lengths=tuple(args.lengths),
        p=args.p,
        count=args.count,
        reference_L=args.reference_L,
    )
    fn = {"unbiasedness": unbiasedness_study, "rate": rate_study,
          "psd": psd_study, "ablation": ablation_study}[args.study]
    return fn(cfg).to_dict()


def cmd_gen(args) -> dict:
    seed = args.seed if args.seed is not None else _default_seed()
    seqs = gen_synthetic(seed, args.count, args.d, (args.min_len, args.max_len))
    width = len(str(args.count - 1))
    return {
        "dim": args.d,
        "sequences": [{"id": f"seq{i:0{width}d}", "vectors": s.vectors.tolist()} for i, s in enumerate(seqs)],
    }


# -- entry point ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="swkernel", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="similarity between two sequences of a document")
    p.add_argument("document")
    p.add_argument("id_x")
    p.add_argument("id_y")
    p.add_argument("--metric", choices=METRICS, default="usw")
    _kernel_args(p)
    p.add_argument("--gamma-s", type=float, default=1.0, help="soft-DTW smoothing")
    _pe_args(p, "none")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("rerank", help="select a candidate from a rerank document")
    p.add_argument("document")
    p.add_argument("--rule", choices=("usw", "cosine"), default="usw")
    p.add_argument("--alpha", type=float, default=None, help="override the document's alpha")
    _kernel_args(p)
    _pe_args(p, "rotary")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_rerank)

    p = sub.add_parser("gram", help="USW-RBF Gram matrix of a document")
    p.add_argument("document")
    _kernel_args(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gram)

    p = sub.add_parser("study", help="run a statistical study on synthetic data")
    p.add_argument("study", choices=STUDIES)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--replicates", type=int, default=None)
    p.add_argument("--L-grid", dest="L_grid", type=_csv(int), default=None)
    p.add_argument("--gamma-grid", dest="gamma_grid", type=_csv(float), default=None)
    p.add_argument("--lengths", type=int, nargs=2, default=(10, 10), metavar=("N", "M"))
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--count", type=int, default=8)
    p.add_argument("--reference-L", dest="reference_L", type=int, default=REFERENCE_L)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_study)

    p = sub.add_parser("gen", help="write a synthetic sequence document")
    p.add_argument("--count", type=int, default=8)
    p.add_argument("--d", type=int, default=8)
    p.add_argument("--min-len", type=int, default=5)
    p.add_argument("--max-len", type=int, default=20)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _emit(args.func(args), args.out)
    except CliError as exc:
        print(f"swkernel: {exc}", file=sys.stderr)
        return exc.code
    except InvalidArgumentError as exc:
        print(f"swkernel: invalid argument: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DegenerateInputError, FloatingPointError, OverflowError) as exc:
        print(f"swkernel: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
