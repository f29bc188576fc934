"""Class numbers as representation numbers of ternary quadratic forms."""

from __future__ import annotations

from mockhurwitz.qseries import Q5, Q7, ternary_theta, verify_example, verify_theta_cubed


def main() -> None:
    for name, form in (("Q5", Q5), ("Q7", Q7)):
        print(name, ternary_theta(form, 20))
    print(verify_theta_cubed(200).summary())
    for N in (5, 7):
        print(f"N = {N}:", verify_example(N, 101).summary())


if __name__ == "__main__":
    main()
