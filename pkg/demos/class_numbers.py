"""Hurwitz class numbers and their level-N generalizations."""

from __future__ import annotations

from fractions import Fraction

from mockhurwitz.classnumbers import gen_hurwitz, hurwitz, hurwitz_oracle


def main() -> None:
    print("n   H(n)   H_{5,5}(n)  H_{1,5}(n)")
    for n in range(0, 24):
        if n % 4 in (0, 3):
            print(f"{n:<3} {str(hurwitz(n)):<6} {str(gen_hurwitz(ell=5, N=5, n=n)):<11} {gen_hurwitz(ell=1, N=5, n=n)}")
    assert all(hurwitz(n) == hurwitz_oracle(n) for n in range(500))
    print("reduced-form count agrees with the L-function formula for n < 500")
    N = 7
    ok = all(gen_hurwitz(ell=N, N=N, n=n) / (1 - N)
             == hurwitz(n) - Fraction(N + 1, N) * gen_hurwitz(ell=1, N=N, n=n) for n in range(200))
    print(f"prime-level relation at N = {N}: {'holds' if ok else 'FAILS'} for n < 200")


if __name__ == "__main__":
    main()
