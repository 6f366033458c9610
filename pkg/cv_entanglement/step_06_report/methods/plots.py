from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd
from loguru import logger


def _read(csv_path):
    csv_path = Path(csv_path)
    if not csv_path.exists():
        logger.warning(f"Skipping plot: {csv_path} not found")
        return None
    return pd.read_csv(csv_path)


def _save(fig, output_path, dpi):
    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(output_path, dpi=dpi)
    plt.close(fig)
    logger.info(f"Saved {output_path.name}")


def plot_attenuation(csv_path, output_path, dpi=300):
    df = _read(csv_path)
    if df is None:
        return

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(df["eta"], df["log_negativity_one_arm"], marker="o", color="skyblue", label="loss on one arm")
    ax.plot(df["eta"], df["log_negativity_both_arms"], marker="s", color="orchid", label="loss on both arms")
    ax.set_xlabel("transmissivity η")
    ax.set_ylabel("log-negativity [ebit]")
    ax.legend(frameon=False, fontsize=8)
    _save(fig, output_path, dpi)


def plot_oracle(csv_path, output_path, dpi=300):
    df = _read(csv_path)
    if df is None:
        return

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(df["r"], df["log_negativity_gaussian"], color="skyblue", label="covariance matrix")
    ax.scatter(df["r"], df["log_negativity_fock"], color="orchid", zorder=3, label="number basis")
    ax.set_xlabel("squeezing r")
    ax.set_ylabel("log-negativity [ebit]")
    ax.legend(frameon=False, fontsize=8)
    _save(fig, output_path, dpi)


def plot_continuity(csv_path, output_path, dpi=300):
    df = _read(csv_path)
    if df is None:
        return

    fig, ax = plt.subplots(figsize=(6, 4))
    for column, color in (("trace_distance", "skyblue"), ("entanglement", "orchid"), ("mean_energy", "gray")):
        ax.loglog(df["k"], df[column], marker="o", color=color, label=column.replace("_", " "))
    ax.set_xlabel("k")
    ax.legend(frameon=False, fontsize=8)
    _save(fig, output_path, dpi)


def plot_distillation(tuning_csv, trace_csv, output_path, dpi=300):
    tuning = _read(tuning_csv)
    trace = _read(trace_csv)
    if tuning is None or trace is None:
        return

    fig, (left, right) = plt.subplots(1, 2, figsize=(10, 4))
    left.plot(tuning["V_squared"], tuning["log_negativity"], marker="o", color="skyblue")
    left.set_xlabel("beam splitter transmissivity V²")
    left.set_ylabel("log-negativity after first step [ebit]")

    right.plot(trace["iteration"], trace["log_negativity"], marker="o", color="skyblue", label="log-negativity")
    right.plot(trace["iteration"], trace["gaussianity_distance"], marker="s", color="orchid", label="distance to Gaussian")
    right.set_xlabel("iteration")
    right.legend(frameon=False, fontsize=8)
    _save(fig, output_path, dpi)


def plot_no_go(csv_path, output_path, dpi=300):
    df = _read(csv_path)
    if df is None:
        return

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(df["gain"], bins=40, color="skyblue", edgecolor="none")
    ax.axvline(0.0, color="orchid", linestyle="--")
    ax.set_xlabel("log-negativity gain")
    ax.set_ylabel("protocols")
    _save(fig, output_path, dpi)
