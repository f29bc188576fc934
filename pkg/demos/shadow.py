"""The two exact routes to the shadow coefficients g_n and the modularity check."""

from __future__ import annotations

from mockhurwitz.qseries import shadow_coefficient, shadow_coefficient_rewritten, verify_shadow, verify_theorem_1_1


def main() -> None:
    N = 15
    print("n   from Kloosterman zeta   from class numbers")
    for n in range(0, 24):
        if n % 4 in (0, 3):
            print(f"{n:<3} {str(shadow_coefficient(N, n)):<23} {shadow_coefficient_rewritten(N, n)}")
    print(verify_shadow(N, 201).summary())
    print(verify_theorem_1_1(N, 201).summary())


if __name__ == "__main__":
    main()
