"""Command-line front end: mode dispatch, data loading, artifact emission.

Exit codes: 0 success, 1 configuration error, 2 data error, 3 solver
non-convergence.  Certificates are written as deterministic JSON (shortest
round-tripping float literals, fixed key order); --plot-data additionally
emits CSV files with the bound staircases, the per-solution point bounds,
and (certify mode) the approximation level as the solution count grows.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .data import fit_standardizer, parse_libsvm, split_holdout, split_kfold
from .errors import ConfigError, DataError, SolverError
from .loss import LossKind
from .bounds import StaircaseBound
from .pathalg import CertifiedSearch, SearchConfig, grid_strategy
from .solver import SolverConfig

_LOSS_NAMES = {"huber": "huber_hinge", "hinge": "hinge", "logistic": "logistic"}


@dataclass
class RunConfig:
    mode: str = "find"
    train: str | None = None
    valid: str | None = None
    data: str | None = None
    loss: str = "huber"
    huber_width: float = 1.0
    c_min: float = 1e-3
    c_max: float = 1e3
    eps: str = "0.1"
    grid_m: int = 4
    rho: str = "1.5"
    folds: int = 0
    holdout_fraction: float = 0.5
    seed: int = 0
    exact: bool = False
    zero_one_labels: bool = False
    standardize: bool = False
    clist: str | None = None
    out: str | None = None
    plot_data: bool = False
    min_step: float = 1e-6
    max_iterations: int = 20000
    final_full_merge: bool = False

    def validate(self):
        if self.mode not in ("certify", "find", "find-tricked", "path", "cv"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        wants_cv = self.mode == "cv" or self.folds > 0
        if self.mode == "cv" and self.folds < 2:
            raise ConfigError("cv mode needs --folds >= 2")
        if wants_cv and self.mode == "path":
            raise ConfigError("path mode does not support cross-validation")
        if wants_cv:
            if not self.data:
                raise ConfigError("cross-validation needs --data")
        else:
            if not self.data and not (self.train and self.valid):
                raise ConfigError("need --train and --valid, or --data for a holdout split")
        if self.mode == "certify" and not self.clist and self.grid_m < 1:
            raise ConfigError("certify needs --clist or --grid-m >= 1")
        if self.loss not in _LOSS_NAMES:
            raise ConfigError(f"unknown loss {self.loss!r}")


def _read_dataset(path, cfg, reject_zero=False):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_libsvm(
                fh, zero_one_labels=cfg.zero_one_labels, reject_zero_rows=reject_zero
            )
    except OSError as exc:
        raise DataError(f"cannot read dataset {path!r}: {exc}") from None


def _read_clist(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DataError(f"cannot read C list {path!r}: {exc}") from None
    vals = [float(tok) for tok in text.replace(",", " ").split()]
    if not vals:
        raise DataError(f"C list {path!r} is empty")
    return vals


def _build_folds(cfg):
    if cfg.mode == "cv" or cfg.folds > 0:
        data = _read_dataset(cfg.data, cfg)
        folds = split_kfold(data, cfg.folds, seed=cfg.seed)
    elif cfg.data:
        data = _read_dataset(cfg.data, cfg)
        folds = [split_holdout(data, cfg.holdout_fraction, seed=cfg.seed)]
    else:
        train = _read_dataset(cfg.train, cfg)
        valid = _read_dataset(cfg.valid, cfg, reject_zero=True)
        if train.dim != valid.dim:
            dim = max(train.dim, valid.dim)
            train = _pad(train, dim)
            valid = _pad(valid, dim)
        folds = [(train, valid)]
    if cfg.standardize:
        scaled = []
        for train, valid in folds:
            scaler = fit_standardizer(train)
            scaled.append((scaler.transform(train), scaler.transform(valid)))
        folds = scaled
    return folds


def _pad(dataset, dim):
    from .data import Dataset
    import scipy.sparse as sp

    X = sp.csr_matrix(
        (dataset.X.data, dataset.X.indices, dataset.X.indptr),
        shape=(dataset.n, dim),
    )
    return Dataset(X, dataset.y, dim=dim)


class _FloatRepr(float):
    def __repr__(self):  # shortest round-tripping literal (<= 17 significant digits)
        return float.__repr__(float(self))


def _jsonable(obj):
    if isinstance(obj, float):
        return _FloatRepr(obj)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def write_certificate_json(cert, stream):
    json.dump(_jsonable(cert.to_json_dict()), stream, indent=2)
    stream.write("\n")


def _write_staircase_csv(stair, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("C_breakpoint,value_left_of_breakpoint,value_right_of_breakpoint\n")
        for b, left, right in stair.segment_table():
            fh.write(f"{b!r},{left!r},{right!r}\n")


def _write_points_csv(cert, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("c,lb,ub\n")
        for p in cert.solved:
            fh.write(f"{p.c!r},{p.lb!r},{p.ub!r}\n")


def _write_eps_vs_t_csv(engine, cert, path):
    """Approximation level for each prefix of the solved sequence (nested sets)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("t,epsilon\n")
        groups = engine.solve_order
        ebest = engine.n_total
        for t in range(1, len(groups) + 1):
            ebest = min(ebest, groups[t - 1].ub_count)
            stairs = [g.lower_staircase() for g in groups[:t]]
            merged = StaircaseBound.merge(stairs, "max")
            eps_t = (ebest - merged.min_count_on()) / engine.n_total
            fh.write(f"{t},{eps_t!r}\n")


def run(cfg):
    """Execute one RunConfig; returns the exit code and writes artifacts."""
    try:
        cfg.validate()
        search_cfg = SearchConfig(
            c_min=cfg.c_min,
            c_max=cfg.c_max,
            epsilon=cfg.eps,
            trick1_grid_size=cfg.grid_m,
            trick2_rho=cfg.rho,
            min_step=cfg.min_step,
            solution_mode="exact" if cfg.exact else "approximate",
            final_full_merge=cfg.final_full_merge,
        )
        solver_cfg = SolverConfig(max_iterations=cfg.max_iterations)
        kind = LossKind(_LOSS_NAMES[cfg.loss], huber_width=cfg.huber_width)
        folds = _build_folds(cfg)
        engine = CertifiedSearch(
            folds, kind=kind, config=search_cfg, solver_config=solver_cfg,
            seed=cfg.seed,
        )
        reg_path = None
        if cfg.mode in ("find", "cv"):
            cert = engine.run_find()
        elif cfg.mode == "find-tricked":
            cert = engine.run_find_tricked()
        elif cfg.mode == "path":
            reg_path = engine.run_path()
            cert = reg_path.certificate
        else:  # certify
            if cfg.clist:
                c_list = _read_clist(cfg.clist)
            else:
                c_list = [float(c) for c in grid_strategy(search_cfg, cfg.grid_m)]
            cert = engine.run_certify(c_list)
        cert.mode = cfg.mode

        for note in cert.warnings:
            print(f"certreg: warning: {note}", file=sys.stderr)
        if cfg.out:
            with open(cfg.out, "w", encoding="utf-8") as fh:
                write_certificate_json(cert, fh)
        else:
            write_certificate_json(cert, sys.stdout)
        if cfg.plot_data:
            if not cfg.out:
                raise ConfigError("--plot-data requires --out")
            stem = cfg.out[:-5] if cfg.out.endswith(".json") else cfg.out
            _write_staircase_csv(cert.lower_bound_path, stem + ".lb_path.csv")
            _write_staircase_csv(engine.merged_upper_path(), stem + ".ub_path.csv")
            _write_points_csv(cert, stem + ".points.csv")
            if cfg.mode == "certify":
                _write_eps_vs_t_csv(engine, cert, stem + ".eps_vs_t.csv")
        if reg_path is not None and cfg.out:
            stem = cfg.out[:-5] if cfg.out.endswith(".json") else cfg.out
            with open(stem + ".path_breakpoints.txt", "w", encoding="utf-8") as fh:
                fh.writelines(f"{b!r}\n" for b in reg_path.breakpoints)
        return 0
    except ConfigError as exc:
        print(f"certreg: config error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"certreg: data error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"certreg: solver error: {exc}", file=sys.stderr)
        return 3


def build_parser():
    p = argparse.ArgumentParser(
        prog="certreg",
        description=(
            "Certified regularization-parameter selection: validation/CV error "
            "bound paths and epsilon-approximate C search for L2-regularized "
            "linear binary classifiers."
        ),
    )
    p.add_argument("--mode", default="find",
                   choices=["certify", "find", "find-tricked", "path", "cv"])
    p.add_argument("--train", help="libsvm-format training file")
    p.add_argument("--valid", help="libsvm-format validation file")
    p.add_argument("--data", help="single libsvm-format file (split internally)")
    p.add_argument("--loss", default="huber", choices=sorted(_LOSS_NAMES))
    p.add_argument("--huber-width", type=float, default=1.0)
    p.add_argument("--c-min", type=float, default=1e-3)
    p.add_argument("--c-max", type=float, default=1e3)
    p.add_argument("--eps", default="0.1", help="target approximation level in [0,1]")
    p.add_argument("--grid-m", type=int, default=4,
                   help="coarse grid size (find-tricked) / grid size T (certify)")
    p.add_argument("--rho", default="1.5", help="overstep factor for find-tricked")
    p.add_argument("--folds", type=int, default=0, help="k for cross-validation")
    p.add_argument("--holdout-frac", type=float, default=0.5, dest="holdout_fraction")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exact", action="store_true", help="solve to optimality")
    p.add_argument("--zero-one-labels", action="store_true",
                   help="accept 0/1 labels, mapping 0 to -1")
    p.add_argument("--standardize", action="store_true",
                   help="rescale features to [-1,1] using training-set min/max")
    p.add_argument("--clist", help="file with C values to certify")
    p.add_argument("--out", help="certificate JSON output path (default: stdout)")
    p.add_argument("--plot-data", action="store_true",
                   help="emit bound-path and point-bound CSVs next to --out")
    p.add_argument("--min-step", type=float, default=1e-6)
    p.add_argument("--max-iterations", type=int, default=20000)
    p.add_argument("--final-full-merge", action="store_true",
                   help="build the certificate path from all solutions merged")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        mode=args.mode,
        train=args.train,
        valid=args.valid,
        data=args.data,
        loss=args.loss,
        huber_width=args.huber_width,
        c_min=args.c_min,
        c_max=args.c_max,
        eps=args.eps,
        grid_m=args.grid_m,
        rho=args.rho,
        folds=args.folds,
        holdout_fraction=args.holdout_fraction,
        seed=args.seed,
        exact=args.exact,
        zero_one_labels=args.zero_one_labels,
        standardize=args.standardize,
        clist=args.clist,
        out=args.out,
        plot_data=args.plot_data,
        min_step=args.min_step,
        max_iterations=args.max_iterations,
        final_full_merge=args.final_full_merge,
    )
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
