#include "pcq/csv.hpp"

#include <charconv>
#include <cmath>

namespace pcq::csv {

std::string fmt(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string fmt(int x) { return std::to_string(x); }

void write_signal(std::ostream& os, const PiecewisePolynomial& u) {
    os << "step,coeff_index,re,im\n";
    for (int n = 0; n < u.grid.N; ++n)
        for (int j = 0; j <= u.grid.p; ++j)
            os << n << ',' << j << ',' << fmt(u.coeffs(j, n).real()) << ','
               << fmt(u.coeffs(j, n).imag()) << '\n';
}

void write_weights(std::ostream& os, const ConvolutionWeights& w) {
    os << "n,row,col,re,im\n";
    for (size_t n = 0; n < w.weights.size(); ++n)
        for (int i = 0; i < w.weights[n].rows(); ++i)
            for (int j = 0; j < w.weights[n].cols(); ++j)
                os << n << ',' << i << ',' << j << ','
                   << fmt(w.weights[n](i, j).real()) << ','
                   << fmt(w.weights[n](i, j).imag()) << '\n';
}

void write_spectrum(std::ostream& os, const std::vector<SpectrumRow>& rows) {
    os << "p,z_re,z_im,lam_re,lam_im\n";
    for (const SpectrumRow& r : rows)
        os << r.p << ',' << fmt(r.z.real()) << ',' << fmt(r.z.imag()) << ','
           << fmt(r.lambda.real()) << ',' << fmt(r.lambda.imag()) << '\n';
}

void write_records(std::ostream& os, const std::vector<ConvergenceRecord>& records) {
    os << "p,h,N,T,solver,rel_error,seconds,p_ref\n";
    for (const ConvergenceRecord& r : records)
        os << r.p << ',' << fmt(r.h) << ',' << r.N << ',' << fmt(r.T) << ','
           << r.solver << ',' << fmt(r.rel_error) << ',' << fmt(r.seconds) << ','
           << r.p_ref << '\n';
}

void write_stability(std::ostream& os, const std::vector<StabilityRow>& rows) {
    os << "p,h,T,ratio_nodal,ratio_L2,ratio_pointwise\n";
    for (const StabilityRow& r : rows)
        os << r.p << ',' << fmt(r.h) << ',' << fmt(r.T) << ','
           << fmt(r.ratios.nodal) << ',' << fmt(r.ratios.l2) << ','
           << fmt(r.ratios.pointwise) << '\n';
}

}  // namespace pcq::csv
