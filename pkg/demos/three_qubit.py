"""The smallest braid: three qubits, measurements K_D, K_E and S."""

from matchcodes.threequbit import INPUTS, demo_three_qubit, exact_output_group, oracle_acceptance


def main():
    for k in INPUTS:
        grp = ", ".join(p.to_compact() for p in exact_output_group(*k))
        twice = ", ".join(p.to_compact() for p in exact_output_group(*k, repeats=2))
        print(f"{k}: after R <{grp}>   after R^2 <{twice}>")
    print(f"post-selection succeeds with probability {oracle_acceptance(1, 1):.3f} per exchange")
    rep = demo_three_qubit(2000, seed=1)
    for r in rep["reports"]:
        print(f"{r['state_in']}: accepted {r['accepted']['R']} of {r['shots']}, "
              f"P(pi_A=+1) after R = {r['freq_piA']['R']:.3f}, R^2 flips both: {r['r2_flips']}")
    print("all checks:", rep["ok"])


if __name__ == "__main__":
    main()
