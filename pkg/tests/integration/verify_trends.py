"""Integration check of the benchmark trends at experiment scale."""

import tempfile

from scipy import stats

from src.bench import (
    ExperimentSpec,
    emit_outputs,
    run_kernel_experiment,
    run_singularity_experiment,
    run_synthetic_experiment,
    summarize_rows,
)

RATIOS = [round(0.01 * i, 2) for i in range(1, 11)]


def verify_trends():
    """Run each experiment at its default size and report the expected trends."""
    print("Verifying Nystrom Benchmark Trends\n")
    print("=" * 60)
    out_dir = tempfile.mkdtemp(prefix="nystromite-")

    print("\n1. Kernel experiment on gaussian blobs...")
    try:
        spec = ExperimentSpec(experiment="kernel", samplers=["algorithm1", "random", "svd"],
                              ratios=RATIOS, norm="fro", output_dir=out_dir)
        result = run_kernel_experiment(spec)
        summary = summarize_rows(result.rows)
        alg = summary[summary["sampler"] == "algorithm1"]
        rho = stats.spearmanr(alg["ratio"], alg["mean_error"])[0]
        status = "PASS" if rho <= -0.8 else "FAIL"
        print(f"[{status}] algorithm1 error vs ratio Spearman rho = {rho:.3f}")
        print(f"  wrote {emit_outputs(result, out_dir, plot=True)['csv']}")
    except Exception as e:
        print(f"[FAIL] Error: {e}")

    print("\n2. Synthetic experiment, exponential decay...")
    try:
        spec = ExperimentSpec(experiment="synthetic", samplers=["algorithm1", "random", "svd"],
                              ratios=RATIOS, decays=["exponential"], output_dir=out_dir)
        summary = summarize_rows(run_synthetic_experiment(spec).rows)
        for ratio in RATIOS[2:]:
            at = summary[summary["ratio"] == ratio].set_index("sampler")["mean_error"]
            status = "PASS" if at["algorithm1"] <= at["random"] else "FAIL"
            print(f"[{status}] ratio {ratio:.2f}: algorithm1 {at['algorithm1']:.3e} vs random {at['random']:.3e}")
        at = summary[summary["ratio"] == 0.05].set_index("sampler")["mean_error"]
        status = "PASS" if at["algorithm1"] <= 10 * at["svd"] else "FAIL"
        print(f"[{status}] ratio 0.05: algorithm1 {at['algorithm1']:.3e} vs 10x svd {10 * at['svd']:.3e}")
    except Exception as e:
        print(f"[FAIL] Error: {e}")

    print("\n3. Singularity experiment...")
    try:
        spec = ExperimentSpec(experiment="singularity", samplers=["random", "algorithm1"],
                              ratios=[0.05], trials=100, size=300, decays=["exponential"],
                              output_dir=out_dir)
        result = run_singularity_experiment(spec)
        corr = result.summary["correlation"]
        status = "PASS" if corr is not None and corr < -0.5 else "FAIL"
        print(f"[{status}] log-log correlation = {corr}")
        print(f"  {result.summary['points']} points, {result.summary['excluded']} excluded")
    except Exception as e:
        print(f"[FAIL] Error: {e}")

    print(f"\nResults written under {out_dir}")


if __name__ == "__main__":
    verify_trends()
