"""Compare the random access code strategies with the classical bounds."""

from eacomm.protocol import behavior_of
from eacomm.protocol import check_nonadaptive
from eacomm.protocol import lift_to_adaptive
from eacomm.strategies import adaptive_ea_trit_rac
from eacomm.strategies import chsh_ea_bit_rac
from eacomm.strategies import na_ea_trit_rac
from eacomm.strategies import stochastic_dense_coding_rac
from eacomm.tasks import classical_bound
from eacomm.tasks import evaluate
from eacomm.tasks import rac_functional


def main() -> None:
    f = rac_functional()
    print(f"classical bit:  {classical_bound(f, 2).value:.6f}")
    print(f"classical trit: {classical_bound(f, 3).value:.6f}")

    rows = [
        ("EA bit", chsh_ea_bit_rac()),
        ("EA trit, non-adaptive", na_ea_trit_rac()),
        ("EA trit, adaptive", adaptive_ea_trit_rac()),
        ("EA qubit, product decoding", stochastic_dense_coding_rac()),
    ]
    for label, strategy in rows:
        print(f"{label:28s} {evaluate(f, behavior_of(strategy)):.6f}")

    print("EA bit lift:", check_nonadaptive(lift_to_adaptive(chsh_ea_bit_rac())).verdict)
    print("EA trit adaptive:", check_nonadaptive(adaptive_ea_trit_rac()).verdict)


if __name__ == "__main__":
    main()
