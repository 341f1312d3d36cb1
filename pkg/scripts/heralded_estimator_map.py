"""Error of the heralded-g2 squeezing estimator against exact Fock statistics.

Prints the relative error of the recovered lambda^2 for a TMSV with equal
signal and idler efficiencies over a (lambda, eta) grid.

    python scripts/heralded_estimator_map.py
"""


from topsqueeze.oracles import heralded_round_trip

LAMBDAS = (0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4)
ETAS = (0.1, 0.3, 0.5, 0.6, 0.8, 1.0)


def main():
    print("lambda \\ eta " + "".join(f"{e:>9g}" for e in ETAS))
    for lam in LAMBDAS:
        errs = [heralded_round_trip(lam, eta, cutoff=16).relative_error for eta in ETAS]
        print(f"{lam:12g} " + "".join(f"{100 * e:+8.2f}%" for e in errs))
    print("\ncells with |error| > 5% mark where the estimator's low-gain expansion breaks down")


if __name__ == "__main__":
    main()
