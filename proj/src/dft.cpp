#include "pcq/dft.hpp"

#include <cmath>
#include <numbers>

namespace pcq {

namespace {

// exp(sign*2*pi*i*j/n) for j = 0..n-1, with conjugate symmetry enforced
std::vector<cplx> twiddle_table(int n, int sign) {
    std::vector<cplx> w(n);
    const int half = n / 2;
    for (int j = 0; j <= half; ++j) {
        const double th = 2.0 * std::numbers::pi * j / n;
        w[j] = cplx(std::cos(th), sign * std::sin(th));
    }
    for (int j = half + 1; j < n; ++j) w[j] = std::conj(w[n - j]);
    return w;
}

int smallest_prime_factor(int n) {
    for (int f = 2; f * f <= n; ++f)
        if (n % f == 0) return f;
    return n;
}

std::vector<cplx> dft_rec(const std::vector<cplx>& x, int sign) {
    const int n = static_cast<int>(x.size());
    if (n == 1) return x;
    const int r = smallest_prime_factor(n);
    if (r == n) return dft_direct(x, sign);

    const int m = n / r;
    const std::vector<cplx> w = twiddle_table(n, sign);
    std::vector<std::vector<cplx>> sub(r);
    for (int l = 0; l < r; ++l) {
        sub[l].resize(m);
        for (int t = 0; t < m; ++t) sub[l][t] = x[static_cast<size_t>(r) * t + l];
        sub[l] = dft_rec(sub[l], sign);
    }
    std::vector<cplx> y(n);
    for (int k = 0; k < n; ++k) {
        cplx acc = 0.0;
        for (int l = 0; l < r; ++l)
            acc += w[static_cast<long long>(l) * k % n] * sub[l][k % m];
        y[k] = acc;
    }
    return y;
}

}  // namespace

std::vector<cplx> dft_direct(const std::vector<cplx>& x, int sign) {
    const int n = static_cast<int>(x.size());
    if (n == 0) throw ContractError("dft: empty input");
    const std::vector<cplx> w = twiddle_table(n, sign);
    std::vector<cplx> y(n);
    for (int k = 0; k < n; ++k) {
        cplx acc = 0.0;
        for (int j = 0; j < n; ++j) acc += x[j] * w[static_cast<long long>(j) * k % n];
        y[k] = acc;
    }
    return y;
}

std::vector<cplx> dft(const std::vector<cplx>& x, int sign) {
    if (x.empty()) throw ContractError("dft: empty input");
    if (sign != 1 && sign != -1) throw ContractError("dft: sign must be +1 or -1");
    return dft_rec(x, sign);
}

}  // namespace pcq
