#pragma once

// Fast multiplication of polynomials over GF(2), the kernel behind the
// streaming Toeplitz encoder.
//
// Quadratic word convolution cannot touch the problem sizes here (an input of
// 2.5e8 bits against a diagonal band of 1.3e9 bits is ~7e13 word products), so
// products run as convolutions of 32-bit limbs over GF(2^64): limbs of degree
// < 32 multiply to degree <= 62, sums are XORs, and no modular reduction ever
// fires, so every limb of the result is the exact GF(2) sub-convolution.
// The limb convolution itself is evaluated with an additive FFT over a Cantor
// basis of GF(2^64), which gives O(P log^2 P) XORs and O(P log P) field
// multiplications for P points.  Field multiplications use PCLMULQDQ when the
// CPU has it and a 4-bit-window software carry-less multiply otherwise.
//
// Bits pack exactly as in BitString: limb k of an operand is bits
// [32k, 32k+32), i.e. (word[k/2] >> (32*(k%2))) & 0xffffffff.

#include <cstdint>
#include <vector>

namespace qfp {

// Carry-less 64x64 -> 128 bit multiply.  `hw` dispatches to PCLMUL when
// available; `soft` is the portable path, exposed so tests can cross-check
// the two.
void clmul64(std::uint64_t a, std::uint64_t b, std::uint64_t& lo,
             std::uint64_t& hi);
void clmul64_soft(std::uint64_t a, std::uint64_t b, std::uint64_t& lo,
                  std::uint64_t& hi);
bool clmul64_is_hw();

// GF(2^64) with modulus x^64 + x^4 + x^3 + x + 1.
std::uint64_t gf64_mul(std::uint64_t a, std::uint64_t b);
std::uint64_t gf64_pow(std::uint64_t a, std::uint64_t exponent);

// Cantor basis b_0..b_31 of GF(2^64): b_0 = 1 and b_i^2 + b_i = b_{i-1}.
// Subspace point j of a 2^t-point transform is XOR of b_i over set bits of j.
const std::vector<std::uint64_t>& cantor_basis();

// Additive FFT plan for 2^t points.  forward() takes 2^t polynomial
// coefficients (over GF(2^64)) to their evaluations at the subspace points in
// index order; inverse() is the exact inverse (basis conversion, no scaling).
// Both need a caller-provided scratch buffer of 2^t words.  Plans are
// immutable after construction and safe to share.
class AdditiveFftPlan {
 public:
  explicit AdditiveFftPlan(int log2_points);

  int log2_points() const { return t_; }
  std::uint64_t points() const { return std::uint64_t{1} << t_; }

  void forward(std::uint64_t* f, std::uint64_t* scratch) const;
  void inverse(std::uint64_t* f, std::uint64_t* scratch) const;

 private:
  int t_;
  std::vector<std::uint64_t> tw_;  // tw_[j] = subspace point with index 2j

  void taylor_blocks(std::uint64_t* f, std::uint64_t block) const;
  void untaylor_blocks(std::uint64_t* f, std::uint64_t block) const;
};

// Product engine with a fixed left operand: packs and transforms `a` once,
// then multiplies it against many right operands (the Toeplitz diagonal is
// streamed through in windows).  Holds scratch, so use one engine per thread.
class Gf2ConvolutionEngine {
 public:
  // max_b_bits bounds the right operand length accepted by multiply().
  Gf2ConvolutionEngine(const std::uint64_t* a, std::uint64_t a_bits,
                       std::uint64_t max_b_bits);

  std::uint64_t a_bits() const { return a_bits_; }
  std::uint64_t max_b_bits() const { return max_b_bits_; }
  // Transform footprint in words, for sizing window choices against memory.
  std::uint64_t points() const { return plan_.points(); }

  // XORs the product a*b into out, which must hold at least
  // words_for(a_bits + b_bits - 1) words.  b_bits must be in
  // [1, max_b_bits].
  void multiply_xor(const std::uint64_t* b, std::uint64_t b_bits,
                    std::uint64_t* out);

 private:
  std::uint64_t a_bits_;
  std::uint64_t max_b_bits_;
  AdditiveFftPlan plan_;
  std::vector<std::uint64_t> a_hat_;
  std::vector<std::uint64_t> work_;
  std::vector<std::uint64_t> scratch_;
};

// One-shot product c = a * b, bit length a_bits + b_bits - 1 (empty when
// either operand is empty).  Dispatches between schoolbook carry-less word
// convolution for small sizes and the FFT engine for large ones.
std::vector<std::uint64_t> gf2_multiply(const std::uint64_t* a,
                                        std::uint64_t a_bits,
                                        const std::uint64_t* b,
                                        std::uint64_t b_bits);

// Schoolbook path, also the mid-scale oracle in tests.
std::vector<std::uint64_t> gf2_multiply_schoolbook(const std::uint64_t* a,
                                                   std::uint64_t a_bits,
                                                   const std::uint64_t* b,
                                                   std::uint64_t b_bits);

}  // namespace qfp
