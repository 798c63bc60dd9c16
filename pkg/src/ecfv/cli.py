"""Command-line entry point: ``python -m ecfv --dt 1e-3 --tfinal 0.18 ...``."""
import sys

import numpy as np

from .harness import ConfigError, parse_config, run, write_outputs

DEFAULT_OUT = "ecfv_out"


def main(argv=None):
    try:
        config = parse_config(argv)
    except ConfigError as exc:
        print(f"ecfv: usage error ({exc.key}): {exc}", file=sys.stderr)
        return 2
    artifacts = run(config)
    out_dir = config.out_dir or DEFAULT_OUT
    paths = write_outputs(artifacts, out_dir)

    print(f"{config.flux} / {config.time}: {artifacts.steps_taken} of {config.n_steps} steps "
          f"in {artifacts.wall_time:.2f} s")
    if artifacts.budgets:
        print(f"cumulative entropy production: {artifacts.cumulative_production[-1]:.6e}")
    if artifacts.newton_iterations and any(artifacts.newton_iterations):
        its = np.asarray(artifacts.newton_iterations)
        print(f"Newton iterations: total {its.sum()}, max per step {its.max()}")
    print(f"outputs in {out_dir}: {len(paths['snapshots'])} snapshot(s), plot script {paths['plot']}")
    if not artifacts.complete:
        print(f"run incomplete: {artifacts.error}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
