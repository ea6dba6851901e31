#ifndef QFP_TOEPLITZ_HPP
#define QFP_TOEPLITZ_HPP

// Random linear code with a Toeplitz generator matrix.  The matrix is m x n
// with T[i][j] = first_col[i-j] for i >= j and first_row[j-i] otherwise, so
// the whole code is defined by the diagonal band
//
//   D[p] = first_row[n-1-p]          for p < n-1
//   D[p] = first_col[p-(n-1)]        for p >= n-1   (length n+m-1)
//
// and encoding is a polynomial product over GF(2): codeword bit i is the
// coefficient of z^(n-1+i) in x(z) * D(z).  That makes the Gbit-scale encode
// a carry-free convolution (see gf2poly.hpp) instead of a dense matvec.
//
// Codes built by new_code draw the band from the counter stream of a 64-bit
// seed: first_col[i] is stream bit i, first_row[j] is stream bit m+j-1 for
// j >= 1 (first_row[0] aliases first_col[0]).  The band is therefore stream
// bits [0, m+n-1) and never needs to be materialized.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qfp/bitstring.hpp"

namespace qfp {

// ceil(n / rate) with the rate reconstructed as a small rational (denominator
// up to 10^6) so decimal config rates give exact integer arithmetic; falls
// back to long-double ceil for rates with no small rational form.
std::uint64_t codeword_length(std::uint64_t n, double rate);

class ToeplitzCode {
 public:
  // Seeds the band from `seed`.  An all-zero band (which would make every
  // codeword zero) is rejected and redrawn from seed+1, seed+2, ...; the
  // retry count is exposed and the event logged to stderr.
  static ToeplitzCode new_code(std::uint64_t n, double rate,
                               double design_distance, std::uint64_t seed);

  // Explicit band, mainly for tests and tiny worked examples.  Such codes
  // have no seed and cannot be serialized.
  static ToeplitzCode from_parts(std::uint64_t n, double rate,
                                 double design_distance, BitString first_col,
                                 BitString first_row);

  std::uint64_t n() const { return n_; }
  std::uint64_t m() const { return m_; }
  double rate() const { return rate_; }
  double design_distance() const { return design_distance_; }
  bool seeded() const { return seeded_; }
  std::uint64_t seed() const;
  // Rejections applied before the effective seed was accepted.
  std::uint64_t seed_retries() const { return seed_retries_; }

  // Materialized band columns; refused (length guard) beyond an in-memory
  // cap, where only the streaming paths below apply.
  BitString first_col() const;
  BitString first_row() const;

  // T * x over GF(2).  Materializes the m-bit codeword, so it is guarded by
  // the same in-memory cap as first_col().
  BitString encode(const BitString& x) const;

  // Dense matvec evaluated row by row, no convolution involved; the oracle
  // the fast paths are tested against.  Guarded to n <= 4096.
  BitString encode_dense(const BitString& x) const;

  // Streaming encode: consumes the input as concatenated chunks, emits the
  // codeword as a sequence of segments whose concatenation equals encode(x).
  // Peak memory follows the FFT window size chosen from `memory_budget_bytes`
  // and is independent of m; inputs too long for the budget are refused.
  void encode_streaming(
      const std::vector<BitString>& x_chunks,
      const std::function<void(const BitString&)>& emit,
      std::uint64_t memory_budget_bytes = kDefaultMemoryBudget) const;

  // weight(encode(x)) without holding the codeword, for distance
  // measurements at streaming scale.
  std::uint64_t encode_weight(const BitString& x,
                              std::uint64_t memory_budget_bytes =
                                  kDefaultMemoryBudget) const;

  // Flat one-line descriptor (n, m, rate, seed, design_distance); enough to
  // regenerate the band deterministically.
  std::string descriptor() const;
  static ToeplitzCode from_descriptor(const std::string& line);

  static constexpr std::uint64_t kDefaultMemoryBudget = 2500u * 1000 * 1000;

 private:
  ToeplitzCode() = default;

  // Band bit D[p], p in [0, n+m-1).
  bool band_bit(std::uint64_t p) const;
  // Fills whole words of the band region [offset, offset+len) bits.
  void fill_band_words(std::uint64_t offset, std::uint64_t len,
                       std::uint64_t* out) const;

  std::uint64_t n_ = 0;
  std::uint64_t m_ = 0;
  double rate_ = 0;
  double design_distance_ = 0;
  bool seeded_ = false;
  std::uint64_t seed_ = 0;
  std::uint64_t seed_retries_ = 0;
  // Both empty for seeded codes (band read from the stream instead).
  BitString first_col_;
  BitString first_row_;
};

// Smallest relative codeword weight over all 2^n - 1 nonzero inputs; the
// exact relative minimum distance.  Refused for n > 24 (cost guard).
double estimate_min_distance_exhaustive(const ToeplitzCode& code);

// Minimum over `trials` random nonzero inputs: an upper bound on the true
// relative distance.
double estimate_min_distance_sampled(const ToeplitzCode& code,
                                     std::uint64_t trials, std::uint64_t seed);

}  // namespace qfp

#endif  // QFP_TOEPLITZ_HPP
