"""Kloosterman zeta functions: factored form, truncated sum, residue and constant term."""

from __future__ import annotations

from mockhurwitz.kloosterman import c_frak, kz_factored, kz_truncated_oracle, residue_r, verify_kohnen


def main() -> None:
    for n, N in ((-3, 1), (5, 1), (12, 7)):
        exact = kz_factored(n, N, 2.0)
        approx = kz_truncated_oracle(n, N, 2.0, 2000)
        print(f"Z({n}, 2) at N = {N}: factored {exact:.10f}, truncated {approx:.10f}")
    for n in (0, 1, 5):
        print(f"residue at n = {n}: {residue_r(n, 5).to_dict()}  ~ {complex(residue_r(n, 5)):.6f}")
    for n in (-3, -4, 4, 5):
        val = c_frak(n, 1)
        print(f"c({n}) [{val.tag}] = {val.approx:.10f}")
    print(verify_kohnen((1, 5), c_max=9, m_max=6).summary())


if __name__ == "__main__":
    main()
