"""Protocol adapter for candidate heuristics.

Usage: python3 python_shim.py <candidate_source.py> [seed]

Reads wire-protocol requests on stdin, loads the candidate module, calls its
predict_trajectory(trajectory) for every window, and writes the response to
stdout. The candidate sees plain numpy arrays and never touches the protocol.

Exit codes: 2 bad invocation, 3 candidate import/runtime failure, 4 candidate
returned a wrong shape.
"""

import importlib.util
import sys

import numpy as np


def load_candidate(path):
    spec = importlib.util.spec_from_file_location("candidate", path)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    predict = getattr(module, "predict_trajectory", None)
    if predict is None:
        raise AttributeError("candidate defines no predict_trajectory")
    return predict


def main():
    if len(sys.argv) < 2:
        print("usage: python_shim.py <candidate_source.py> [seed]", file=sys.stderr)
        return 2
    if len(sys.argv) >= 3:
        np.random.seed(int(sys.argv[2]) % 2**32)

    try:
        predict = load_candidate(sys.argv[1])
    except BaseException as exc:  # noqa: BLE001 - report and fail loudly
        print(f"candidate load failed: {exc!r}", file=sys.stderr)
        return 3

    tokens = sys.stdin.read().split()
    pos = 0

    def take(n):
        nonlocal pos
        chunk = tokens[pos:pos + n]
        if len(chunk) != n:
            raise ValueError("request ended early")
        pos += n
        return chunk

    magic, version, num_windows = take(3)
    if magic != "TRAJEVO" or version != "1":
        print(f"unexpected request header: {magic} {version}", file=sys.stderr)
        return 2

    out = []
    for _ in range(int(num_windows)):
        tag, agents, t_obs, t_pred, k = take(5)
        if tag != "W":
            print(f"unexpected window tag: {tag}", file=sys.stderr)
            return 2
        agents, t_obs, t_pred, k = int(agents), int(t_obs), int(t_pred), int(k)
        flat = np.array([float(v) for v in take(agents * t_obs * 2)])
        trajectory = flat.reshape(agents, t_obs, 2)

        try:
            pred = np.asarray(predict(trajectory), dtype=float)
        except BaseException as exc:  # noqa: BLE001
            print(f"candidate raised: {exc!r}", file=sys.stderr)
            return 3
        if pred.shape != (k, agents, t_pred, 2):
            print(
                f"candidate returned shape {pred.shape}, "
                f"expected {(k, agents, t_pred, 2)}",
                file=sys.stderr,
            )
            return 4

        out.append(f"P {agents}")
        for row in pred.reshape(-1, 2):
            out.append(f"{row[0]:.9f} {row[1]:.9f}")

    sys.stdout.write("\n".join(out) + ("\n" if out else ""))
    return 0


if __name__ == "__main__":
    sys.exit(main())
