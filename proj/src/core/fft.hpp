#pragma once

#include <complex>

namespace ostrovsky::detail {

// Unnormalised length-n DFTs through a shared FFTW plan cache.
// forward: out_k = sum_j in_j e^{-2 pi i jk/n}; backward uses e^{+2 pi i jk/n}.
// in and out may alias.
void dft_forward(int n, const std::complex<double>* in, std::complex<double>* out);
void dft_backward(int n, const std::complex<double>* in, std::complex<double>* out);

}  // namespace ostrovsky::detail
