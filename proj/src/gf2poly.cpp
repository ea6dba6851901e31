#include "qfp/gf2poly.hpp"

#include <bit>
#include <cassert>
#include <stdexcept>

#if defined(__x86_64__) || defined(__i386__)
#define QFP_X86 1
#include <immintrin.h>
#endif

namespace qfp {

namespace {

using u64 = std::uint64_t;

constexpr u64 kGfFeedback = 0x1B;  // x^4 + x^3 + x + 1, low part of the modulus

u64 limbs_for(u64 bits) { return (bits + 31) / 32; }
u64 words_for(u64 bits) { return (bits + 63) / 64; }

void clmul64_soft_impl(u64 a, u64 b, u64& lo, u64& hi) {
  // 4-bit window: tab[n] = carry-less a*n, built by shift/xor, then Horner
  // over the nibbles of b from the top.
  u64 tlo[16], thi[16];
  tlo[0] = 0;
  thi[0] = 0;
  tlo[1] = a;
  thi[1] = 0;
  for (int n = 2; n < 16; n += 2) {
    thi[n] = (thi[n / 2] << 1) | (tlo[n / 2] >> 63);
    tlo[n] = tlo[n / 2] << 1;
    tlo[n + 1] = tlo[n] ^ a;
    thi[n + 1] = thi[n];
  }
  u64 rlo = 0, rhi = 0;
  for (int s = 60; s >= 0; s -= 4) {
    rhi = (rhi << 4) | (rlo >> 60);
    rlo <<= 4;
    const unsigned nib = static_cast<unsigned>((b >> s) & 0xF);
    rlo ^= tlo[nib];
    rhi ^= thi[nib];
  }
  lo = rlo;
  hi = rhi;
}

u64 gf64_mul_soft(u64 a, u64 b) {
  u64 lo, hi, flo, fhi, glo, ghi;
  clmul64_soft_impl(a, b, lo, hi);
  clmul64_soft_impl(hi, kGfFeedback, flo, fhi);
  clmul64_soft_impl(fhi, kGfFeedback, glo, ghi);
  assert(ghi == 0);
  return lo ^ flo ^ glo;
}

#ifdef QFP_X86
__attribute__((target("pclmul,sse4.1"))) void clmul64_hw(u64 a, u64 b, u64& lo,
                                                         u64& hi) {
  const __m128i p = _mm_clmulepi64_si128(
      _mm_set_epi64x(0, static_cast<long long>(a)),
      _mm_set_epi64x(0, static_cast<long long>(b)), 0x00);
  lo = static_cast<u64>(_mm_cvtsi128_si64(p));
  hi = static_cast<u64>(_mm_extract_epi64(p, 1));
}

__attribute__((target("pclmul,sse4.1"))) u64 gf64_mul_hw(u64 a, u64 b) {
  const __m128i poly = _mm_set_epi64x(0, static_cast<long long>(kGfFeedback));
  const __m128i p = _mm_clmulepi64_si128(
      _mm_set_epi64x(0, static_cast<long long>(a)),
      _mm_set_epi64x(0, static_cast<long long>(b)), 0x00);
  // Fold the high half twice through the feedback polynomial; the second fold
  // input has at most 4 significant bits, so it terminates.
  const __m128i f1 = _mm_clmulepi64_si128(p, poly, 0x01);
  const __m128i f2 = _mm_clmulepi64_si128(f1, poly, 0x01);
  return static_cast<u64>(_mm_cvtsi128_si64(p)) ^
         static_cast<u64>(_mm_cvtsi128_si64(f1)) ^
         static_cast<u64>(_mm_cvtsi128_si64(f2));
}

bool have_pclmul() {
  return __builtin_cpu_supports("pclmul") && __builtin_cpu_supports("sse4.1");
}
#else
bool have_pclmul() { return false; }
#endif

using ClmulFn = void (*)(u64, u64, u64&, u64&);
using GfMulFn = u64 (*)(u64, u64);

ClmulFn g_clmul = clmul64_soft_impl;
GfMulFn g_gf64_mul = gf64_mul_soft;
bool g_hw = false;

const struct ClmulDispatch {
  ClmulDispatch() {
#ifdef QFP_X86
    if (have_pclmul()) {
      g_clmul = clmul64_hw;
      g_gf64_mul = gf64_mul_hw;
      g_hw = true;
    }
#endif
  }
} g_clmul_dispatch;

// phi(y) = y^2 + y is GF(2)-linear with kernel {0, 1}; solving phi(y) = c by
// Gaussian elimination over the polynomial basis gives the next Cantor basis
// element.  Runs once per process.
u64 solve_phi(const u64 (&rows)[64], u64 c) {
  u64 r[64];
  bool rhs[64];
  for (int i = 0; i < 64; ++i) {
    r[i] = rows[i];
    rhs[i] = (c >> i) & 1;
  }
  int pivot_col[64];
  int rank = 0;
  for (int col = 0; col < 64; ++col) {
    int pr = -1;
    for (int i = rank; i < 64; ++i)
      if ((r[i] >> col) & 1) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    std::swap(r[pr], r[rank]);
    std::swap(rhs[pr], rhs[rank]);
    for (int i = 0; i < 64; ++i)
      if (i != rank && ((r[i] >> col) & 1)) {
        r[i] ^= r[rank];
        rhs[i] ^= rhs[rank];
      }
    pivot_col[rank++] = col;
  }
  for (int i = rank; i < 64; ++i)
    if (rhs[i])
      throw std::logic_error("cantor basis: trace condition violated");
  u64 y = 0;
  for (int i = 0; i < rank; ++i)
    if (rhs[i]) y |= u64{1} << pivot_col[i];
  return y;
}

std::vector<u64> build_cantor_basis() {
  // Matrix of phi in the polynomial basis, stored as rows over column bits.
  u64 rows[64] = {};
  for (int j = 0; j < 64; ++j) {
    const u64 e = u64{1} << j;
    const u64 col = gf64_mul(e, e) ^ e;
    for (int i = 0; i < 64; ++i)
      if ((col >> i) & 1) rows[i] |= u64{1} << j;
  }
  std::vector<u64> beta{1};
  while (beta.size() < 32) {
    const u64 y = solve_phi(rows, beta.back());
    if ((gf64_mul(y, y) ^ y) != beta.back())
      throw std::logic_error("cantor basis: chain verification failed");
    beta.push_back(y);
  }
  return beta;
}

// Packs bit-packed words into 32-bit limbs, one per transform slot, masking
// stray bits past `bits`.
void pack_limbs(const u64* words, u64 bits, u64* slots, u64 nslots) {
  const u64 nl = limbs_for(bits);
  for (u64 k = 0; k < nl; ++k) {
    u64 v = (words[k >> 1] >> (32 * (k & 1))) & 0xFFFFFFFFull;
    if (const u64 rem = bits - 32 * k; rem < 32) v &= (u64{1} << rem) - 1;
    slots[k] = v;
  }
  for (u64 k = nl; k < nslots; ++k) slots[k] = 0;
}

int log2_points_for(u64 slots) {
  int t = 0;
  while ((u64{1} << t) < slots) ++t;
  return t;
}

}  // namespace

void clmul64(u64 a, u64 b, u64& lo, u64& hi) { g_clmul(a, b, lo, hi); }

void clmul64_soft(u64 a, u64 b, u64& lo, u64& hi) {
  clmul64_soft_impl(a, b, lo, hi);
}

bool clmul64_is_hw() { return g_hw; }

u64 gf64_mul(u64 a, u64 b) { return g_gf64_mul(a, b); }

u64 gf64_pow(u64 a, u64 exponent) {
  u64 result = 1, base = a;
  while (exponent != 0) {
    if (exponent & 1) result = gf64_mul(result, base);
    base = gf64_mul(base, base);
    exponent >>= 1;
  }
  return result;
}

const std::vector<u64>& cantor_basis() {
  static const std::vector<u64> basis = build_cantor_basis();
  return basis;
}

AdditiveFftPlan::AdditiveFftPlan(int log2_points) : t_(log2_points) {
  if (t_ < 0 || t_ > 30)
    throw std::invalid_argument("AdditiveFftPlan: log2_points outside [0, 30]");
  const auto& beta = cantor_basis();
  const u64 half = t_ > 0 ? (u64{1} << (t_ - 1)) : 0;
  tw_.resize(half);
  if (half > 0) tw_[0] = 0;
  for (u64 j = 1; j < half; ++j)
    tw_[j] = tw_[j & (j - 1)] ^ beta[std::countr_zero(j) + 1];
}

void AdditiveFftPlan::taylor_blocks(u64* f, u64 block) const {
  // Fold every sub-block so each block of `block` coefficients becomes the
  // interleaved pair expansion in x^2 + x (see the 4-quarter identity
  // x^{2M} = (x^2+x)^M + x^M, which holds because M is a power of two).
  const u64 L = points();
  for (u64 size = block; size >= 4; size >>= 1) {
    const u64 quarter = size >> 2;
    for (u64 base = 0; base < L; base += size) {
      u64* p = f + base;
      for (u64 i = 0; i < quarter; ++i) p[2 * quarter + i] ^= p[3 * quarter + i];
      for (u64 i = 0; i < quarter; ++i) p[quarter + i] ^= p[2 * quarter + i];
    }
  }
}

void AdditiveFftPlan::untaylor_blocks(u64* f, u64 block) const {
  const u64 L = points();
  for (u64 size = 4; size <= block; size <<= 1) {
    const u64 quarter = size >> 2;
    for (u64 base = 0; base < L; base += size) {
      u64* p = f + base;
      for (u64 i = 0; i < quarter; ++i) p[quarter + i] ^= p[2 * quarter + i];
      for (u64 i = 0; i < quarter; ++i) p[2 * quarter + i] ^= p[3 * quarter + i];
    }
  }
}

void AdditiveFftPlan::forward(u64* f, u64* scratch) const {
  const u64 L = points();
  u64* a = f;
  u64* b = scratch;
  // Top-down: Taylor-expand blocks, then split even/odd coefficients into
  // halves.  Both halves recurse on the same image subspace because the
  // Cantor basis maps through y^2 + y onto its own prefix.
  for (u64 block = L; block >= 2; block >>= 1) {
    taylor_blocks(a, block);
    const u64 half = block >> 1;
    for (u64 base = 0; base < L; base += block)
      for (u64 j = 0; j < half; ++j) {
        b[base + j] = a[base + 2 * j];
        b[base + half + j] = a[base + 2 * j + 1];
      }
    std::swap(a, b);
  }
  // Bottom-up: combine child evaluations; the pair at indices (2j, 2j+1)
  // sits at points tw_[j] and tw_[j] + 1, and only the even one multiplies.
  for (u64 block = 2; block <= L; block <<= 1) {
    const u64 half = block >> 1;
    for (u64 base = 0; base < L; base += block) {
      const u64* u = a + base;
      const u64* v = a + base + half;
      u64* out = b + base;
      out[0] = u[0];
      out[1] = u[0] ^ v[0];
      for (u64 j = 1; j < half; ++j) {
        const u64 lo = u[j] ^ gf64_mul(tw_[j], v[j]);
        out[2 * j] = lo;
        out[2 * j + 1] = lo ^ v[j];
      }
    }
    std::swap(a, b);
  }
  assert(a == f);
}

void AdditiveFftPlan::inverse(u64* f, u64* scratch) const {
  const u64 L = points();
  u64* a = f;
  u64* b = scratch;
  for (u64 block = L; block >= 2; block >>= 1) {
    const u64 half = block >> 1;
    for (u64 base = 0; base < L; base += block) {
      const u64* in = a + base;
      u64* u = b + base;
      u64* v = b + base + half;
      v[0] = in[0] ^ in[1];
      u[0] = in[0];
      for (u64 j = 1; j < half; ++j) {
        const u64 vv = in[2 * j] ^ in[2 * j + 1];
        v[j] = vv;
        u[j] = in[2 * j] ^ gf64_mul(tw_[j], vv);
      }
    }
    std::swap(a, b);
  }
  for (u64 block = 2; block <= L; block <<= 1) {
    const u64 half = block >> 1;
    for (u64 base = 0; base < L; base += block)
      for (u64 j = 0; j < half; ++j) {
        b[base + 2 * j] = a[base + j];
        b[base + 2 * j + 1] = a[base + half + j];
      }
    std::swap(a, b);
    untaylor_blocks(a, block);
  }
  assert(a == f);
}

Gf2ConvolutionEngine::Gf2ConvolutionEngine(const u64* a, u64 a_bits,
                                           u64 max_b_bits)
    : a_bits_(a_bits),
      max_b_bits_(max_b_bits),
      plan_(log2_points_for(limbs_for(a_bits) + limbs_for(max_b_bits))) {
  if (a_bits == 0 || max_b_bits == 0)
    throw std::invalid_argument("Gf2ConvolutionEngine: empty operand");
  const u64 P = plan_.points();
  a_hat_.resize(P);
  work_.resize(P);
  scratch_.resize(P);
  pack_limbs(a, a_bits, a_hat_.data(), P);
  plan_.forward(a_hat_.data(), scratch_.data());
}

void Gf2ConvolutionEngine::multiply_xor(const u64* b, u64 b_bits, u64* out) {
  if (b_bits == 0 || b_bits > max_b_bits_)
    throw std::invalid_argument(
        "Gf2ConvolutionEngine: operand length outside [1, max_b_bits]");
  const u64 P = plan_.points();
  pack_limbs(b, b_bits, work_.data(), P);
  plan_.forward(work_.data(), scratch_.data());
  for (u64 j = 0; j < P; ++j) work_[j] = gf64_mul(work_[j], a_hat_[j]);
  plan_.inverse(work_.data(), scratch_.data());
  // Unpack: limb k of the product lands at bit offset 32k; limbs carry up to
  // 63 bits, so odd limbs straddle a word boundary.  Bits past the product
  // length are zero, which keeps the guarded writes silent no-ops.
  const u64 out_words = words_for(a_bits_ + b_bits - 1);
  const u64 nc = limbs_for(a_bits_) + limbs_for(b_bits) - 1;
  for (u64 k = 0; k < nc; ++k) {
    const u64 v = work_[k];
    assert((v >> 63) == 0);
    const u64 w = k >> 1;
    if ((k & 1) == 0) {
      assert(w < out_words);
      out[w] ^= v;
    } else {
      out[w] ^= v << 32;
      if (w + 1 < out_words)
        out[w + 1] ^= v >> 32;
      else
        assert((v >> 32) == 0);
    }
  }
}

std::vector<u64> gf2_multiply_schoolbook(const u64* a, u64 a_bits, const u64* b,
                                         u64 b_bits) {
  if (a_bits == 0 || b_bits == 0) return {};
  const u64 wa = words_for(a_bits);
  const u64 wb = words_for(b_bits);
  std::vector<u64> out(wa + wb, 0);
  for (u64 i = 0; i < wa; ++i) {
    for (u64 j = 0; j < wb; ++j) {
      u64 lo, hi;
      clmul64(a[i], b[j], lo, hi);
      out[i + j] ^= lo;
      out[i + j + 1] ^= hi;
    }
  }
  assert(out.back() == 0 || words_for(a_bits + b_bits - 1) == out.size());
  out.resize(words_for(a_bits + b_bits - 1));
  return out;
}

std::vector<u64> gf2_multiply(const u64* a, u64 a_bits, const u64* b,
                              u64 b_bits) {
  if (a_bits == 0 || b_bits == 0) return {};
  if (a_bits + b_bits <= (u64{1} << 15))
    return gf2_multiply_schoolbook(a, a_bits, b, b_bits);
  std::vector<u64> out(words_for(a_bits + b_bits - 1), 0);
  Gf2ConvolutionEngine engine(a, a_bits, b_bits);
  engine.multiply_xor(b, b_bits, out.data());
  return out;
}

}  // namespace qfp
