#include "pcq/symbols.hpp"

#include <cmath>

namespace pcq {

namespace {

constexpr double kSeriesThreshold = 1e-2;

// V(s) = (1 - e^{-2s})/(2s) = sum_{k>=1} -a_k s^{k-1}/2 with a_k = (-2)^k/k!.
cplx sphere_V_eval(cplx s) {
    if (std::abs(s) >= kSeriesThreshold)
        return (1.0 - std::exp(-2.0 * s)) / (2.0 * s);
    cplx acc = 0.0, spow = 1.0;
    double a = 1.0;
    for (int k = 1; k <= 24; ++k) {
        a *= -2.0 / k;
        acc += -a * spow / 2.0;
        spow *= s;
        if (std::abs(a) * std::abs(spow) < 1e-18) break;
    }
    return acc;
}

std::vector<cplx> poly_mul(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    std::vector<cplx> c(a.size() + b.size() - 1, cplx(0.0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

}  // namespace

TransferFunction sym_identity() {
    return {[](cplx) { return cplx(1.0); }, 0.0, 0.0, "identity",
            RationalForm{{cplx(1.0)}, {cplx(1.0)}}};
}

TransferFunction sym_s() {
    return {[](cplx s) { return s; }, 0.0, 1.0, "s",
            RationalForm{{cplx(0.0), cplx(1.0)}, {cplx(1.0)}}};
}

TransferFunction sym_s_inv() {
    return {[](cplx s) { return 1.0 / s; }, 0.0, -1.0, "s_inv",
            RationalForm{{cplx(1.0)}, {cplx(0.0), cplx(1.0)}}};
}

TransferFunction sym_resolvent(cplx zeta) {
    if (zeta.real() > 0.0)
        throw ContractError("sym_resolvent: requires Re zeta <= 0");
    return {[zeta](cplx s) { return 1.0 / (s - zeta); }, 0.0, -1.0,
            "resolvent", RationalForm{{cplx(1.0)}, {-zeta, cplx(1.0)}}};
}

TransferFunction sphere_V() {
    return {sphere_V_eval, 0.0, -1.0, "sphereV", std::nullopt};
}

TransferFunction sphere_half_plus_K() {
    // (s - 1 + (s+1)e^{-2s})/(2s) = 1 - (s+1) V(s)
    return {[](cplx s) { return 1.0 - (s + 1.0) * sphere_V_eval(s); },
            0.0, 0.0, "half_plus_K", std::nullopt};
}

TransferFunction sphere_mhalf_plus_K() {
    return {[](cplx s) { return -(s + 1.0) * sphere_V_eval(s); }, 0.0, 0.0,
            "mhalf_plus_K", std::nullopt};
}

TransferFunction sphere_sV() {
    return {[](cplx s) { return s * sphere_V_eval(s); }, 0.0, 0.0, "sV", std::nullopt};
}

TransferFunction sym_product(const TransferFunction& k1, const TransferFunction& k2) {
    TransferFunction out;
    auto e1 = k1.eval, e2 = k2.eval;
    out.eval = [e1, e2](cplx s) { return e1(s) * e2(s); };
    out.sigma = std::max(k1.sigma, k2.sigma);
    out.mu = k1.mu + k2.mu;
    out.label = k1.label + "*" + k2.label;
    if (k1.rational && k2.rational)
        out.rational = RationalForm{poly_mul(k1.rational->num, k2.rational->num),
                                    poly_mul(k1.rational->den, k2.rational->den)};
    return out;
}

TransferFunction sym_scale(cplx c, const TransferFunction& k) {
    TransferFunction out = k;
    auto e = k.eval;
    out.eval = [c, e](cplx s) { return c * e(s); };
    out.label = "scale(" + k.label + ")";
    if (k.rational) {
        out.rational = k.rational;
        for (auto& a : out.rational->num) a *= c;
    }
    return out;
}

TransferFunction symbol_registry(const std::string& label) {
    if (label == "identity" || label == "1") return sym_identity();
    if (label == "s") return sym_s();
    if (label == "s_inv") return sym_s_inv();
    if (label == "sphereV" || label == "sV1") return sphere_V();
    if (label == "sV") return sphere_sV();
    if (label == "mhalf_plus_K") return sphere_mhalf_plus_K();
    if (label == "half_plus_K") return sphere_half_plus_K();
    throw ContractError("symbol_registry: unknown symbol label '" + label + "'");
}

std::vector<std::string> symbol_registry_labels() {
    return {"identity", "s", "s_inv", "sphereV", "sV", "mhalf_plus_K", "half_plus_K"};
}

}  // namespace pcq
