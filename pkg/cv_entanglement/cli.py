"""Command-line surface of the toolkit.

Results go to stdout as fixed-precision numbers or tab-separated tables,
diagnostics go to stderr through loguru. Exit codes: 0 success, 1 malformed
input, 2 unphysical state or channel, 3 infeasible request.
"""

import argparse
import json
import sys

import numpy as np
import pandas as pd
from loguru import logger
from pydantic import ValidationError

from cv_entanglement.step_01_phase_space.methods.validation import require_valid, validate_covariance
from cv_entanglement.step_02_entanglement.methods.convertibility import (
    find_locc_gap,
    glocc_convertible,
    locc_convertible_pure,
    locc_convertible_with_catalyst,
)
from cv_entanglement.step_02_entanglement.methods.normal_forms import schmidt_normal_form
from cv_entanglement.step_02_entanglement.methods.ppt import (
    log_negativity_gaussian,
    ppt_verdict,
    separability_witness_verify,
)
from cv_entanglement.step_03_channels.methods.channels import (
    GaussianChannel,
    apply_channel,
    attenuation_channel,
    require_valid_channel,
)
from cv_entanglement.step_03_channels.methods.measurements import homodyne_condition, vacuum_project
from cv_entanglement.step_04_fock_oracle.methods.continuity import continuity_table
from cv_entanglement.step_05_protocols.step_05a_gaussian_nogo.methods.no_go import no_go_monte_carlo
from cv_entanglement.step_05_protocols.step_05b_nongaussian_distillation.methods.first_step import SECOND_PORTS
from cv_entanglement.step_05_protocols.step_05b_nongaussian_distillation.methods.pipeline import (
    distill_pipeline,
    tune_first_step,
)
from cv_entanglement.step_05_protocols.step_05c_passive_entangling.methods.passive import (
    passive_max_entanglement,
    passive_optimizer,
)
from cv_entanglement.utils.config import default_seed, load_master_config
from cv_entanglement.utils.errors import CVEntanglementError, StructuralError
from cv_entanglement.utils.logs import configure_logging
from cv_entanglement.utils.state_files import (
    read_channel_file,
    read_matrix,
    read_state_file,
    read_vector,
    write_state,
)

FLOAT_FORMAT = "%.6f"


class _Parser(argparse.ArgumentParser):
    # Usage errors are malformed input (exit 1), not argparse's exit 2
    def error(self, message):
        raise StructuralError(f"{self.prog}: {message}")


def _print_value(value):
    print(FLOAT_FORMAT % value)


def _print_table(df):
    df.to_csv(sys.stdout, sep="\t", index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def _load(path, validate=True):
    state_file = read_state_file(path)
    state = state_file.to_state()
    if validate:
        require_valid(state.cov)
    return state, state_file.partition


def _emit_state(state, output, partition=None):
    text = write_state(state, output, partition=partition)
    if output is None:
        print(text)
    else:
        logger.info(f"Wrote state to {output}")


# --- subcommands ---

def cmd_validate(args, config):
    state, _ = _load(args.state, validate=False)
    report = validate_covariance(state.cov, tol=config["tolerance_config"]["tol_psd"])
    rows = [{"quantity": "min_uncertainty_eigenvalue", "value": report.min_uncertainty_eigenvalue}]
    rows += [{"quantity": f"nu_{k}", "value": nu} for k, nu in enumerate(report.symplectic_eigenvalues)]
    print(f"valid\t{report.valid}")
    _print_table(pd.DataFrame(rows))
    require_valid(state.cov, tol=config["tolerance_config"]["tol_psd"])


def cmd_negativity(args, config):
    state, partition = _load(args.state)
    _print_value(log_negativity_gaussian(state.cov, args.partition or partition))


def cmd_separability(args, config):
    state, partition = _load(args.state)
    partition = args.partition or partition
    verdict = ppt_verdict(state.cov, partition, tol=config["tolerance_config"]["tol_psd"])
    row = verdict.to_dict()
    if args.witness:
        gamma_a, gamma_b = (read_matrix(path) for path in args.witness)
        row["witness_verified"] = separability_witness_verify(state.cov, gamma_a, gamma_b, partition)
    _print_table(pd.DataFrame([row]))


def cmd_schmidt(args, config):
    state, partition = _load(args.state)
    _, _, r = schmidt_normal_form(state.cov, args.partition or partition, purity_tol=config["tolerance_config"]["purity_tol"])
    _print_table(pd.DataFrame({"pair": range(len(r)), "r": r}))


def cmd_convert(args, config):
    if args.gap is not None:
        gap_config = config["gap_config"]
        _print_table(find_locc_gap(args.gap, gap_config["r_prime_grid"], gap_config["cutoff"]))
        return
    if args.glocc:
        r, r_prime = (read_vector(path) for path in args.glocc)
        print(f"glocc_convertible\t{glocc_convertible(r, r_prime)}")
        return

    alpha, alpha_prime = (read_vector(path) for path in args.locc)
    print(f"locc_convertible\t{locc_convertible_pure(alpha, alpha_prime)}")
    if args.catalyst:
        catalysed = locc_convertible_with_catalyst(alpha, alpha_prime, read_vector(args.catalyst))
        print(f"locc_convertible_with_catalyst\t{catalysed}")


def cmd_channel_apply(args, config):
    state, partition = _load(args.state)
    if args.attenuation is not None:
        channel = attenuation_channel(args.attenuation, n=state.n)
    else:
        channel_file = read_channel_file(args.file)
        channel = GaussianChannel(np.array(channel_file.A), np.array(channel_file.G), channel_file.shift)
    require_valid_channel(channel)
    out = apply_channel(state, channel)
    _emit_state(out, args.output, partition if out.n == state.n else None)


def cmd_measure(args, config):
    state, _ = _load(args.state)
    if args.vacuum:
        conditional = vacuum_project(state, args.mode)
        logger.info(f"Vacuum outcome probability {conditional.probability:.6f}")
        out = conditional.state
    else:
        out = homodyne_condition(state, args.mode, args.homodyne, rcond=config["tolerance_config"]["pinv_rcond"])
    _emit_state(out, args.output)


def cmd_distill_nogo(args, config):
    state, _ = _load(args.state)
    nogo_config = config["nogo_config"]
    seed = args.seed if args.seed is not None else default_seed(config, "nogo_config")
    trials = args.trials if args.trials is not None else nogo_config["trials"]
    result = no_go_monte_carlo(state.cov, trials, seed, flow_time=nogo_config["flow_time"], n_jobs=args.jobs)
    summary = result.to_dict()
    _print_table(pd.DataFrame([{key: summary[key] for key in ("trials", "max_gain", "argmax_trial", "mean_gain")}]))


def cmd_distill_pipeline(args, config):
    trace = distill_pipeline(
        args.r, args.V, args.iters, args.cutoff,
        second_port=args.second_port, detector_efficiency=args.efficiency,
    )
    df = trace.to_frame()
    _print_table(df[["iteration", "log_negativity", "probability", "gaussianity_distance"]])


def cmd_distill_tune(args, config):
    grid = config["distillation_config"]["V_squared_grid"]
    df, best_V = tune_first_step(args.r, grid, args.cutoff, second_port=args.second_port, detector_efficiency=args.efficiency)
    logger.info(f"Best V = {best_V:.6f}")
    _print_table(df)


def cmd_passive_max(args, config):
    state, _ = _load(args.state)
    _print_value(passive_max_entanglement(state.cov))


def cmd_passive_optimize(args, config):
    state, _ = _load(args.state)
    passive_config = config["passive_config"]
    seed = args.seed if args.seed is not None else default_seed(config, "passive_config")
    restarts = args.restarts if args.restarts is not None else passive_config["restarts"]
    result = passive_optimizer(state.cov, restarts=restarts, seed=seed, max_iter=passive_config["max_iter"], n_jobs=args.jobs)
    _print_table(pd.DataFrame([{
        "bound": passive_max_entanglement(state.cov),
        "achieved": result.achieved,
        "mode_a": result.pair[0],
        "mode_b": result.pair[1],
    }]))


def cmd_demo_continuity(args, config):
    if args.kmax is None:
        k_values = config["continuity_config"]["k_values"]
    else:
        k_values = [10 ** e for e in range(1, int(np.floor(np.log10(args.kmax))) + 1)]
        if not k_values:
            raise StructuralError(f"--kmax must be at least 10, got {args.kmax}")
    df = continuity_table(k_values)
    _print_table(df[["k", "trace_distance", "entanglement", "mean_energy"]])


# --- parser ---

def build_parser():
    parser = _Parser(prog="cv_entanglement", description="Gaussian continuous-variable entanglement toolkit.")
    parser.add_argument("--config", default=None, help="Path to a master_config.yaml.")
    parser.add_argument("--log-level", default=None, help="loguru level for stderr diagnostics.")
    parser.add_argument("--jobs", type=int, default=1, help="joblib workers for Monte Carlo and restarts.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="Check gamma + i*sigma >= 0.")
    p.add_argument("state")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("negativity", help="Logarithmic negativity.")
    p.add_argument("state")
    p.add_argument("--partition", default=None, help="Per-mode labels such as 'AB'.")
    p.set_defaults(func=cmd_negativity)

    p = sub.add_parser("separability", help="PPT verdict and optional witness check.")
    p.add_argument("state")
    p.add_argument("--partition", default=None)
    p.add_argument("--witness", nargs=2, metavar=("GAMMA_A", "GAMMA_B"), default=None)
    p.set_defaults(func=cmd_separability)

    p = sub.add_parser("schmidt", help="Two-mode squeezing parameters of a pure state.")
    p.add_argument("state")
    p.add_argument("--partition", default=None)
    p.set_defaults(func=cmd_schmidt)

    p = sub.add_parser("convert", help="Convertibility of pure entangled states.")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--glocc", nargs=2, metavar=("R", "R_PRIME"))
    mode.add_argument("--locc", nargs=2, metavar=("ALPHA", "ALPHA_PRIME"))
    mode.add_argument("--gap", type=float, metavar="R")
    p.add_argument("--catalyst", default=None, help="Catalyst spectrum, used with --locc.")
    p.set_defaults(func=cmd_convert)

    channel = sub.add_parser("channel", help="Gaussian channels.")
    channel_sub = channel.add_subparsers(dest="channel_command", required=True)
    p = channel_sub.add_parser("apply")
    p.add_argument("state")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--attenuation", type=float, metavar="ETA")
    source.add_argument("--file", metavar="CHANNEL")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_channel_apply)

    p = sub.add_parser("measure", help="Condition on a measurement of one mode (0-based index).")
    p.add_argument("state")
    p.add_argument("--mode", type=int, required=True)
    outcome = p.add_mutually_exclusive_group(required=True)
    outcome.add_argument("--homodyne", choices=["X", "P"])
    outcome.add_argument("--vacuum", action="store_true")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_measure)

    distill = sub.add_parser("distill", help="Distillation protocols.")
    distill_sub = distill.add_subparsers(dest="distill_command", required=True)
    p = distill_sub.add_parser("nogo")
    p.add_argument("state")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_distill_nogo)
    for name, func in (("pipeline", cmd_distill_pipeline), ("tune", cmd_distill_tune)):
        p = distill_sub.add_parser(name)
        p.add_argument("--r", type=float, required=True)
        p.add_argument("--cutoff", type=int, default=12)
        p.add_argument("--second-port", choices=SECOND_PORTS, default="vacuum")
        p.add_argument("--efficiency", type=float, default=1.0)
        if name == "pipeline":
            p.add_argument("--V", type=float, required=True)
            p.add_argument("--iters", type=int, default=2)
        p.set_defaults(func=func)

    passive = sub.add_parser("passive", help="Entanglement from passive optics.")
    passive_sub = passive.add_subparsers(dest="passive_command", required=True)
    p = passive_sub.add_parser("max")
    p.add_argument("state")
    p.set_defaults(func=cmd_passive_max)
    p = passive_sub.add_parser("optimize")
    p.add_argument("state")
    p.add_argument("--restarts", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_passive_optimize)

    demo = sub.add_parser("demo", help="Closed-form demonstrations.")
    demo_sub = demo.add_subparsers(dest="demo_command", required=True)
    p = demo_sub.add_parser("continuity")
    p.add_argument("--kmax", type=int, default=None, help="Largest k; rows for k = 10, 100, ... up to it.")
    p.set_defaults(func=cmd_demo_continuity)

    return parser


def run(argv=None):
    try:
        args = build_parser().parse_args(argv)
        config = load_master_config(args.config)
        configure_logging(args.log_level or config["logging_config"]["level"])
        args.func(args, config)
    except CVEntanglementError as e:
        logger.error(str(e))
        return e.exit_code
    except (FileNotFoundError, json.JSONDecodeError, ValidationError) as e:
        logger.error(f"Malformed input: {e}")
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
