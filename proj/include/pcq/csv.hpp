#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "pcq/cqengine.hpp"
#include "pcq/dgref.hpp"
#include "pcq/scatterbench.hpp"
#include "pcq/timebasis.hpp"

namespace pcq::csv {

/// Locale-independent shortest round-trip formatting ('.' decimal point).
std::string fmt(double x);
std::string fmt(int x);

/// header: step,coeff_index,re,im
void write_signal(std::ostream& os, const PiecewisePolynomial& u);

/// header: n,row,col,re,im
void write_weights(std::ostream& os, const ConvolutionWeights& w);

struct SpectrumRow {
    int p;
    cplx z;
    cplx lambda;
};

/// header: p,z_re,z_im,lam_re,lam_im
void write_spectrum(std::ostream& os, const std::vector<SpectrumRow>& rows);

/// header: p,h,N,T,solver,rel_error,seconds,p_ref
void write_records(std::ostream& os, const std::vector<ConvergenceRecord>& records);

struct StabilityRow {
    int p;
    double h;
    double T;
    StabilityRatios ratios;
};

/// header: p,h,T,ratio_nodal,ratio_L2,ratio_pointwise
void write_stability(std::ostream& os, const std::vector<StabilityRow>& rows);

}  // namespace pcq::csv
