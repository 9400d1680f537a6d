"""Compare closed-form quadratic Gauss sums with direct summation for small fields."""

from ovalcodes.charsums import gauss_sum_exhaustive, gauss_sum_quadratic_closed_form
from ovalcodes.gf import make_field

for p in (3, 5, 7):
    for m in range(1, 5):
        f = make_field(p, m)
        direct = complex(gauss_sum_exhaustive(f, (f.q - 1) // 2))
        closed = gauss_sum_quadratic_closed_form(f)
        print(f"GF({p}^{m})  direct={direct:.6f}  closed={closed:.6f}  |diff|={abs(direct - closed):.1e}")
