#pragma once

#include <cstdint>
#include <vector>

namespace vcle::oracle {

// Direct-summation MFCC: naive DFT, filterbank built per bin from the band
// edges, and the DCT written out as a matrix product. Row-major frames x 13.
std::vector<std::vector<double>> reference_mfcc(const std::vector<double>& wave);

// |X_k| for k = 0..n/2 by direct summation.
std::vector<double> naive_dft_magnitude(const std::vector<double>& frame);

// Area-average resample of one RGB24 image to out_w x out_h by explicit
// per-pixel overlap accumulation with exact rational weights.
std::vector<std::uint8_t> reference_downsample(const std::vector<std::uint8_t>& rgb, int w, int h, int out_w, int out_h);

// max |a - b| / max |b| over all entries.
double relative_error(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b);

}  // namespace vcle::oracle
