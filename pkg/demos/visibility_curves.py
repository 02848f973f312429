"""Fringe visibility of a two-OPA interferometer under internal loss.

Prints the three closed-form visibility curves -- loss on the measured
signal arm only, on the conjugate idler arm only, and on both arms equally
-- for a weakly pumped, unseeded device, then shows how a bright coherent
seed on the idler erases the asymmetry between the two arms.

Run with:  python demos/visibility_curves.py
"""

import numpy as np

from su11sim import closed_form

GAIN = 0.1  # balanced squeeze parameter of both OPAs


def print_table(n_i: float) -> None:
    print(f"\nseed photons n_i = {n_i:g}, gain G = {GAIN}")
    print(f"{'t^2':>6} {'signal loss':>12} {'idler loss':>12} {'both arms':>12}")
    for t2 in np.linspace(0.1, 1.0, 10):
        tau = np.sqrt(t2)
        row = (
            closed_form.visibility_signal_loss(tau),
            closed_form.visibility_idler_loss(tau, GAIN, n_i),
            closed_form.visibility_symmetric_loss(tau, GAIN, n_i),
        )
        print(f"{t2:6.2f} " + " ".join(f"{v:12.6f}" for v in row))


def main() -> None:
    print("Visibility vs power transmission of an internal loss element.")
    print("Signal-arm loss is always the most benign: its curve 2t/(t^2+1)")
    print("does not depend on gain or seeding.")
    print_table(0.0)
    print("\nWith a bright seed the idler-loss curve collapses onto the")
    print("signal-loss curve (the arms become interchangeable):")
    print_table(1e4)
    tau = np.sqrt(0.5)
    gap = abs(
        closed_form.visibility_signal_loss(tau)
        - closed_form.visibility_idler_loss(tau, GAIN, 1e4)
    )
    print(f"\nremaining signal/idler gap at t^2 = 0.5: {gap:.2e}")


if __name__ == "__main__":
    main()
