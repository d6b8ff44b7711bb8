#!/usr/bin/env python3
"""
Command-line front end of the affine fermions toolkit

Subcommands: verify | slater | conjecture | kashiwara | collapse-demo.
Reports go to --out or stdout; logs go to stderr.

Exit codes: 0 every check passed, 1 some check failed, 2 usage or input error.
"""

import argparse
import logging
import math
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from config import Config
from services.affine_forms import affine_det, affine_det_form, conjecture_nullspace
from services.collapse_service import CollapseService, collapse_service
from services.domain.measured_space import MeasuredSpace, WaveFunction
from services.domain.qubits import Triple
from services.errors import ConsistencyError
from services.io_service import io_service
from services.kashiwara_service import kashiwara_service, KashiwaraService
from services.numerics import relative_residual, weighted_sum
from services.report import EXIT_CHECK_FAILED, EXIT_USAGE, Report
from services.slater_service import sample_space, sample_wave_function, slater_service
from services.verification_service import SUITES, VerificationService, example_lagrangian_triple

logger = logging.getLogger(__name__)

SLATER_SAMPLE_NODES = 10


@dataclass
class RunConfig:
    """Resolved options of one CLI run."""

    command: str
    input_path: Optional[str] = None
    seed: int = Config.DEFAULT_SEED
    overrides: Dict[str, float] = field(default_factory=dict)
    output_format: str = 'json'
    out: Optional[str] = None
    timing: bool = False
    suites: List[str] = field(default_factory=list)
    dim: int = 2
    arity: int = 3
    degree: Optional[int] = None

    def tol(self, name: str) -> float:
        return Config.tolerance(name, self.overrides)


# ========= Commands =========
def cmd_verify(config: RunConfig) -> Report:
    return VerificationService(config.seed, config.overrides).run(config.suites or None)


def cmd_slater(config: RunConfig) -> Report:
    """One-/two-point functions, Gram determinant and density kernels of one wave function."""
    if config.input_path:
        payload = io_service.load_json(config.input_path)
        space, phi = io_service.slater_input_from_json(payload, config.tol('weights'))
        source = config.input_path
    else:
        rng = np.random.default_rng(config.seed)
        space = sample_space(SLATER_SAMPLE_NODES, rng)
        phi = sample_wave_function(SLATER_SAMPLE_NODES, rng)
        source = f'random (seed {config.seed})'

    report = Report(command='slater')
    report.data['input'] = source
    report.data['nodes'] = [str(n) for n in space.nodes]

    scale = max(phi.scale(), 1.0)
    gram = slater_service.gram_matrix(phi, space)
    gram_det = float(np.linalg.det(gram))
    report.data['gram'] = gram
    report.data['gram_determinant'] = gram_det

    if space.size ** (phi.dim + 1) > Config.MAX_TUPLES:
        _sampled_moments(report, phi, space, gram_det, config)
        return report

    if phi.dim != 2:
        result = slater_service.n_point(phi, space)
        report.data['n_point'] = result.to_dict()
        report.check('slater.one_point', abs(result.one_point) / scale ** (phi.dim + 1), config.tol('one_point'))
        report.check('slater.two_point_gram', relative_residual(result.two_point, result.gram_prediction),
                     config.tol('two_point'), '⟨Ψ²⟩ = (d+1)!·det(Gram)')
        return report

    one = slater_service.one_point(phi, space)
    two = slater_service.two_point(phi, space)
    report.data['one_point'] = one
    report.data['two_point'] = two
    report.check('slater.one_point', abs(one) / scale ** 3, config.tol('one_point'), '⟨Ψ⟩ = 0')
    report.check('slater.two_point_gram', relative_residual(two, 6.0 * gram_det), config.tol('two_point'),
                 '⟨Ψ²⟩ = 6·det(Gram)')
    report.observe('slater.two_point_over_six', two / 6.0, 'equals 1 for orthonormal centered components')

    gamma1 = slater_service.gamma1(phi, space)
    closed = slater_service.gamma1_closed_form(phi, space)
    report.check('slater.gamma1_closed_form', relative_residual(gamma1, closed),
                 config.tol('gamma'), 'γ^(1) = φ̃(x′)ᵀ adj(Gram) φ̃(x)')
    kernels = {'gamma1': (gamma1, [str(n) for n in space.nodes])}

    if space.size <= Config.MAX_MATERIALIZED_NODES:
        gamma2 = slater_service.gamma2(phi, space).matrix()
        report.check('slater.gamma2_closed_form',
                     relative_residual(gamma2, slater_service.gamma2_closed_form(phi, space)), config.tol('gamma'))
        lowest = float(np.min(np.linalg.eigvalsh(gamma2)))
        report.check('slater.gamma2_semidefinite', max(0.0, -lowest), config.tol('psd'))
        kernels['gamma2'] = (gamma2, io_service.pair_labels(space.nodes))
    else:
        report.observe('slater.gamma2_not_materialized', space.size,
                       f'γ^(2) is only materialized for K ≤ {Config.MAX_MATERIALIZED_NODES}')

    _export_kernels(report, kernels, config)
    return report


def _sampled_moments(report: Report, phi: WaveFunction, space: MeasuredSpace, gram_det: float,
                     config: RunConfig) -> None:
    """Seeded sampling estimates for node sets whose tuples exceed MAX_TUPLES."""
    samples = Config.SLATER_SAMPLES
    logger.info(f"K^(d+1) = {space.size ** (phi.dim + 1)} node tuples exceed {Config.MAX_TUPLES}; sampling {samples}")
    one, two = slater_service.estimate_moments(phi, space, samples, np.random.default_rng(config.seed))
    prediction = math.factorial(phi.dim + 1) * gram_det
    report.data['sampling'] = {'samples': samples, 'seed': config.seed, 'one_point': one, 'two_point': two}
    report.observe('slater.sampled_one_point', one, f'sampling estimate over {samples} tuples')
    report.observe('slater.sampled_two_point_ratio', two / prediction if prediction else None,
                   '⟨Ψ²⟩ estimate over (d+1)!·det(Gram)')
    if phi.dim != 2:
        return

    if space.size ** 2 > Config.MAX_TUPLES:
        report.observe('slater.gamma1_not_materialized', space.size, f'γ^(1) needs K² ≤ {Config.MAX_TUPLES}')
        return
    gamma1 = slater_service.gamma1_closed_form(phi, space)
    trace = float(weighted_sum(np.diag(gamma1), space.weights))
    report.check('slater.gamma1_trace', relative_residual(trace, 2.0 * gram_det), config.tol('gamma'),
                 'Σ w γ^(1)(x, x) = 2·det(Gram)')
    report.observe('slater.gamma2_not_materialized', space.size,
                   f'γ^(2) is only materialized for K ≤ {Config.MAX_MATERIALIZED_NODES}')
    _export_kernels(report, {'gamma1': (gamma1, [str(n) for n in space.nodes])}, config)


def _export_kernels(report: Report, kernels: Dict[str, tuple], config: RunConfig) -> None:
    if config.out is None:
        report.data['kernels'] = {name: io_service.kernel_to_sparse(matrix) for name, (matrix, _) in kernels.items()}
        return
    stem, _ = os.path.splitext(config.out)
    files = {}
    for name, (matrix, labels) in kernels.items():
        if config.output_format == 'csv':
            path = f'{stem}_{name}.csv'
            io_service.write_kernel_csv(matrix, path, labels)
        else:
            path = f'{stem}_{name}.json'
            io_service.write_text(path, Report(command=name, data=io_service.kernel_to_sparse(matrix)).to_json())
        files[name] = os.path.basename(path)
    report.data['kernel_files'] = files


def cmd_conjecture(config: RunConfig) -> Report:
    """Nullspace of antisymmetric multi-affine forms per homogeneity sector."""
    d, m = config.dim, config.arity
    sectors = [config.degree] if config.degree is not None else list(range(m + 1))
    report = Report(command='conjecture')
    report.data.update({'d': d, 'm': m})
    results = {}
    for h in sectors:
        result = conjecture_nullspace(d, m, h, config.tol('nullspace'))
        results[str(h)] = result.to_dict()
        report.observe(f'conjecture.h{h}_dimension', result.dimension)
        if m == d + 1 and h == d:
            residual = result.span_residual(affine_det_form(d))
            results[str(h)]['affine_det_span_residual'] = residual
            report.check(f'conjecture.h{h}_affine_det_in_span', residual, config.tol('span'),
                         'affine determinant lies in the antisymmetric sector')
    report.data['sectors'] = results
    return report


def cmd_kashiwara(config: RunConfig) -> Report:
    """Kashiwara index of a Lagrangian triple (the axes-and-diagonal example without --input)."""
    if config.input_path:
        payload = io_service.load_json(config.input_path)
        triple = io_service.lagrangian_from_json(payload, config.tol('lagrangian'))
    else:
        triple = example_lagrangian_triple(config.tol('lagrangian'))
    service = KashiwaraService(config.tol('kashiwara')) if 'kashiwara' in config.overrides else kashiwara_service
    result = service.kashiwara_index(triple)
    report = Report(command='kashiwara')
    report.data['triple'] = triple.to_json()
    report.data['q'] = service.kashiwara_q(triple)
    report.data['index'] = result.to_dict()
    report.expect('kashiwara.inertia_complete', result.n_plus + result.n_minus + result.n_zero == 3 * triple.n,
                  measured=[result.n_plus, result.n_minus, result.n_zero])
    report.observe('kashiwara.signature', result.signature, result.convention)
    return report


def cmd_collapse_demo(config: RunConfig) -> Report:
    """Every stage of the collapse pipeline for one triple."""
    if config.input_path:
        triple = io_service.triple_from_json(io_service.load_json(config.input_path))
    else:
        triple = Triple.random(np.random.default_rng(config.seed))
    service = CollapseService(config.tol('trace')) if 'trace' in config.overrides else collapse_service
    lam = service.lambda_tensor(triple)
    blocks = service.theta(lam)
    tr1 = service.tr1(blocks)
    collapsed = service.quotient_functional(tr1)
    expected = affine_det(np.vstack(triple.points()))

    report = Report(command='collapse-demo')
    report.data.update({
        'triple': triple.to_dict(),
        'lambda': lam.matrix,
        'theta_x': blocks.x_blocks,
        'theta_y': blocks.y_blocks,
        'tr1': tr1,
        'collapsed': collapsed,
        'affine_det': expected,
        'trace_tolerance': service.trace_tolerance,
    })
    report.check('collapse.equals_affine_determinant',
                 abs(collapsed - expected) / max(triple.scale() ** 2, 1.0), config.tol('collapse'))
    return report


COMMANDS = {
    'verify': cmd_verify,
    'slater': cmd_slater,
    'conjecture': cmd_conjecture,
    'kashiwara': cmd_kashiwara,
    'collapse-demo': cmd_collapse_demo,
}


# ========= Argument parsing =========
def parse_tolerance(text: str) -> tuple:
    name, sep, value = text.partition('=')
    if not sep:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    if name not in Config.TOLERANCES:
        raise argparse.ArgumentTypeError(f"unknown tolerance {name!r}; known: {', '.join(sorted(Config.TOLERANCES))}")
    try:
        number = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance {name} needs a number, got {value!r}")
    if not number > 0:
        raise argparse.ArgumentTypeError(f"tolerance {name} must be positive")
    return name, number


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--input', dest='input_path', help='JSON input document')
    common.add_argument('--seed', type=int, default=Config.DEFAULT_SEED,
                        help=f'random seed (default {Config.DEFAULT_SEED})')
    common.add_argument('--tol', action='append', type=parse_tolerance, default=[], metavar='NAME=VALUE',
                        help='override a tolerance (repeatable)')
    common.add_argument('--format', dest='output_format', choices=('json', 'csv'), default='json')
    common.add_argument('--out', help='write the report to this path instead of stdout')
    common.add_argument('--timing', action='store_true', help='include wall time in the report')
    common.add_argument('--log-level', default=Config.LOG_LEVEL,
                        choices=('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'))

    parser = argparse.ArgumentParser(prog='cli.py', description='Affine fermions toolkit')
    sub = parser.add_subparsers(dest='command', required=True)
    for name, help_text in Config.SUPPORTED_COMMANDS.items():
        cmd = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        if name == 'verify':
            cmd.add_argument('--suite', dest='suites', action='append', choices=SUITES, default=[])
        if name == 'conjecture':
            cmd.add_argument('--dim', type=int, default=2, help='dimension d')
            cmd.add_argument('--arity', type=int, default=3, help='number of vector arguments m')
            cmd.add_argument('--degree', type=int, help='homogeneity sector (all sectors when omitted)')
    return parser


def to_run_config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        input_path=args.input_path,
        seed=args.seed,
        overrides=dict(args.tol),
        output_format=args.output_format,
        out=args.out,
        timing=args.timing,
        suites=getattr(args, 'suites', []),
        dim=getattr(args, 'dim', 2),
        arity=getattr(args, 'arity', 3),
        degree=getattr(args, 'degree', None),
    )


def write_report(report: Report, config: RunConfig) -> None:
    if config.output_format == 'csv' and config.command != 'slater':
        frame = pd.DataFrame([r.to_dict() for r in report.records],
                             columns=['name', 'status', 'measured', 'tolerance', 'reference'])
        text = frame.to_csv(index=False)
    else:
        text = report.to_json()
    if config.out:
        io_service.write_text(config.out, text)
        print(report.render_table(), file=sys.stderr)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command and return its exit code."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(format=Config.LOG_FORMAT, level=getattr(logging, args.log_level), stream=sys.stderr)
    config = to_run_config(args)

    try:
        Config.validate()
        started = time.perf_counter()
        report = COMMANDS[config.command](config)
        if config.timing:
            report.wall_time = time.perf_counter() - started
        write_report(report, config)
    except ConsistencyError as e:
        logger.error(f"Internal consistency check failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except (ValueError, OSError) as e:
        logger.error(f"Rejected input: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    if not report.passed:
        logger.warning(f"{report.summary()['failed']} check(s) failed")
    return report.exit_code


if __name__ == '__main__':
    sys.exit(main())
