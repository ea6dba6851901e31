#include "qfp/toeplitz.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>
#include <stdexcept>

#include "qfp/gf2poly.hpp"

namespace qfp {

namespace {

using u64 = std::uint64_t;

// Largest BitString the non-streaming paths will materialize (256 MiB).
constexpr u64 kMaxMaterializeBits = u64{1} << 31;
constexpr u64 kMaxDenseInputBits = 4096;
constexpr int kMaxPlanLog2 = 26;

u64 words_for(u64 bits) { return (bits + 63) / 64; }
u64 limbs_for(u64 bits) { return (bits + 31) / 32; }

// Continued-fraction reconstruction of `value` as num/den with den bounded;
// succeeds for every decimal a config file can carry.
bool rational_approx(double value, u64 max_den, u64& num, u64& den) {
  double x = value;
  u64 h0 = 1, h1 = 0, k0 = 0, k1 = 1;
  for (int iter = 0; iter < 64; ++iter) {
    const double fa = std::floor(x);
    if (fa > 1e18) break;
    const u64 a = static_cast<u64>(fa);
    if (k0 != 0 && a > (max_den - k1) / k0) break;
    const u64 h = a * h0 + h1;
    const u64 k = a * k0 + k1;
    h1 = h0;
    h0 = h;
    k1 = k0;
    k0 = k;
    if (k0 > 0 &&
        std::fabs(value - static_cast<double>(h0) / static_cast<double>(k0)) <=
            1e-12 * std::max(1.0, std::fabs(value))) {
      num = h0;
      den = k0;
      return true;
    }
    const double frac = x - fa;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }
  return false;
}

// Reads 64 stream bits starting at bit position `s0` of the seeded stream.
u64 stream_extract64(u64 seed, u64 s0) {
  const u64 q = s0 >> 6;
  const unsigned r = s0 & 63;
  u64 v = stream_word(seed, q) >> r;
  if (r != 0) v |= stream_word(seed, q + 1) << (64 - r);
  return v;
}

BitString extract_bits(const std::vector<u64>& words, u64 lo, u64 len) {
  std::vector<u64> out(words_for(len), 0);
  const u64 q = lo >> 6;
  const unsigned r = lo & 63;
  for (u64 w = 0; w < out.size(); ++w) {
    u64 v = words[q + w] >> r;
    if (r != 0 && q + w + 1 < words.size()) v |= words[q + w + 1] << (64 - r);
    out[w] = v;
  }
  if (len % 64 != 0) out.back() &= (u64{1} << (len % 64)) - 1;
  return BitString(std::move(out), len);
}

}  // namespace

u64 codeword_length(u64 n, double rate) {
  if (!(rate > 0.0) || rate > 1.0)
    throw std::invalid_argument("codeword_length: rate must be in (0, 1]");
  if (n == 0) throw std::invalid_argument("codeword_length: n must be >= 1");
  u64 num = 0, den = 0;
  if (rational_approx(rate, 1'000'000, num, den)) {
    const unsigned __int128 scaled = static_cast<unsigned __int128>(n) * den;
    return static_cast<u64>((scaled + num - 1) / num);
  }
  return static_cast<u64>(
      std::ceil(static_cast<long double>(n) / static_cast<long double>(rate)));
}

ToeplitzCode ToeplitzCode::new_code(u64 n, double rate, double design_distance,
                                    u64 seed) {
  if (!(design_distance >= 0.0) || design_distance >= 0.5)
    throw std::invalid_argument("new_code: design_distance must be in [0, 0.5)");
  ToeplitzCode code;
  code.n_ = n;
  code.m_ = codeword_length(n, rate);
  code.rate_ = rate;
  code.design_distance_ = design_distance;
  code.seeded_ = true;
  // Band = stream bits [0, m+n-1).  Reject the all-zero band (it encodes
  // everything to zero); in practice the scan exits on the first word.
  const u64 band_bits = code.m_ + n - 1;
  const u64 band_words = words_for(band_bits);
  for (u64 retry = 0;; ++retry) {
    if (retry > 64)
      throw std::runtime_error("new_code: no usable seed found (zero stream?)");
    const u64 candidate = seed + retry;
    bool nonzero = false;
    for (u64 w = 0; w < band_words && !nonzero; ++w) {
      u64 v = stream_word(candidate, w);
      if (w == band_words - 1 && band_bits % 64 != 0)
        v &= (u64{1} << (band_bits % 64)) - 1;
      nonzero = v != 0;
    }
    if (nonzero) {
      code.seed_ = candidate;
      code.seed_retries_ = retry;
      break;
    }
  }
  if (code.seed_retries_ > 0)
    std::fprintf(stderr,
                 "note: all-zero generator band for seed %" PRIu64
                 "; accepted seed %" PRIu64 " after %" PRIu64 " redraw(s)\n",
                 seed, code.seed_, code.seed_retries_);
  return code;
}

ToeplitzCode ToeplitzCode::from_parts(u64 n, double rate,
                                      double design_distance,
                                      BitString first_col,
                                      BitString first_row) {
  if (first_row.size() != n)
    throw std::invalid_argument("from_parts: first_row must have n bits");
  if (first_col.size() != codeword_length(n, rate))
    throw std::invalid_argument(
        "from_parts: first_col length must equal ceil(n / rate)");
  if (first_row.bit(0) != first_col.bit(0))
    throw std::invalid_argument(
        "from_parts: first_row[0] must equal first_col[0]");
  if (!(design_distance >= 0.0) || design_distance >= 0.5)
    throw std::invalid_argument(
        "from_parts: design_distance must be in [0, 0.5)");
  ToeplitzCode code;
  code.n_ = n;
  code.m_ = first_col.size();
  code.rate_ = rate;
  code.design_distance_ = design_distance;
  code.first_col_ = std::move(first_col);
  code.first_row_ = std::move(first_row);
  return code;
}

u64 ToeplitzCode::seed() const {
  if (!seeded_) throw std::logic_error("seed: code has an explicit band");
  return seed_;
}

bool ToeplitzCode::band_bit(u64 p) const {
  assert(p < n_ + m_ - 1);
  if (!seeded_) {
    return p >= n_ - 1 ? first_col_.bit(p - (n_ - 1))
                       : first_row_.bit(n_ - 1 - p);
  }
  const u64 s = p >= n_ - 1 ? p - (n_ - 1) : m_ + n_ - 2 - p;
  return (stream_word(seed_, s >> 6) >> (s & 63)) & 1;
}

void ToeplitzCode::fill_band_words(u64 offset, u64 len, u64* out) const {
  const u64 nwords = words_for(len);
  for (u64 w = 0; w < nwords; ++w) {
    const u64 base = offset + 64 * w;
    u64 v;
    if (seeded_ && base >= n_ - 1) {
      v = stream_extract64(seed_, base - (n_ - 1));
    } else {
      v = 0;
      const u64 top = std::min<u64>(64, len - 64 * w);
      for (u64 i = 0; i < top; ++i)
        if (band_bit(base + i)) v |= u64{1} << i;
    }
    if (64 * w + 64 > len) v &= (u64{1} << (len % 64)) - 1;
    out[w] = v;
  }
}

BitString ToeplitzCode::first_col() const {
  if (!seeded_) return first_col_;
  if (m_ > kMaxMaterializeBits)
    throw std::length_error("first_col: codeword length beyond in-memory cap");
  return BitString::random(seed_, m_);
}

BitString ToeplitzCode::first_row() const {
  if (!seeded_) return first_row_;
  BitString row(n_);
  for (u64 j = 0; j < n_; ++j) row.set_bit(j, band_bit(n_ - 1 - j));
  return row;
}

BitString ToeplitzCode::encode(const BitString& x) const {
  if (x.size() != n_)
    throw std::invalid_argument("encode: input must have n bits");
  if (m_ > kMaxMaterializeBits)
    throw std::length_error(
        "encode: codeword beyond in-memory cap, use encode_streaming");
  const u64 band_bits = n_ + m_ - 1;
  if (2 * n_ + m_ <= (u64{1} << 22)) {
    std::vector<u64> band(words_for(band_bits));
    fill_band_words(0, band_bits, band.data());
    const std::vector<u64> product =
        gf2_multiply(x.words().data(), n_, band.data(), band_bits);
    return extract_bits(product, n_ - 1, m_);
  }
  BitString out(0);
  encode_streaming({x}, [&](const BitString& seg) { out.append(seg); });
  return out;
}

BitString ToeplitzCode::encode_dense(const BitString& x) const {
  if (x.size() != n_)
    throw std::invalid_argument("encode_dense: input must have n bits");
  if (n_ > kMaxDenseInputBits)
    throw std::invalid_argument("encode_dense: oracle path limited to n <= 4096");
  BitString cw(m_);
  for (u64 i = 0; i < m_; ++i) {
    bool acc = false;
    for (u64 j = 0; j < n_; ++j)
      acc ^= band_bit(n_ - 1 + i - j) && x.bit(j);
    cw.set_bit(i, acc);
  }
  return cw;
}

void ToeplitzCode::encode_streaming(
    const std::vector<BitString>& x_chunks,
    const std::function<void(const BitString&)>& emit,
    u64 memory_budget_bytes) const {
  BitString x(0);
  for (const BitString& chunk : x_chunks) x.append(chunk);
  if (x.size() != n_)
    throw std::invalid_argument(
        "encode_streaming: chunks must total exactly n bits");

  // Window size: the FFT plan holds the fixed input spectrum plus one band
  // window, so 2^t limbs must cover the input with comparable headroom left
  // for the window.
  const u64 na = limbs_for(n_);
  const u64 want = na + std::max<u64>(na / 2, 512);
  int t = 0;
  while (t <= kMaxPlanLog2 && (u64{1} << t) < want) ++t;
  const auto plan_bytes = [&](int lt) {
    // Three transform buffers plus the twiddle table, the band window, and
    // the carry region of one window plus the input tail.
    const u64 points = u64{1} << lt;
    const u64 s_bits = (points - na) * 32;
    return 28 * points + s_bits / 8 + (s_bits + n_) / 8 + 64;
  };
  if (t > kMaxPlanLog2 || plan_bytes(t) > memory_budget_bytes)
    throw std::length_error(
        "encode_streaming: input exceeds the streaming memory budget");

  u64 s_limbs = (u64{1} << t) - na;
  s_limbs &= ~u64{1};  // keep windows word-aligned (32-bit limb pairs)
  const u64 s_bits = s_limbs * 32;
  assert(s_bits % 64 == 0 && s_bits > 0);

  Gf2ConvolutionEngine engine(x.words().data(), n_, s_bits);
  const u64 band_bits = n_ + m_ - 1;
  std::vector<u64> window(words_for(s_bits));
  std::vector<u64> carry(words_for(s_bits + n_) + 2, 0);

  for (u64 off = 0; off < band_bits; off += s_bits) {
    const u64 len = std::min(s_bits, band_bits - off);
    fill_band_words(off, len, window.data());
    engine.multiply_xor(window.data(), len, carry.data());
    const bool last = off + len == band_bits;
    // Coefficients below the next window start are settled; on the last
    // window everything is.  Intersect with the codeword slice [n-1, n+m-1).
    const u64 done = last ? n_ + m_ - 1 : off + s_bits;
    const u64 e0 = std::max(off, n_ - 1);
    const u64 e1 = std::min(done, n_ + m_ - 1);
    if (e0 < e1) emit(extract_bits(carry, e0 - off, e1 - e0));
    if (!last) {
      const u64 shift_words = s_bits / 64;
      std::memmove(carry.data(), carry.data() + shift_words,
                   (carry.size() - shift_words) * sizeof(u64));
      std::fill(carry.end() - shift_words, carry.end(), 0);
    }
  }
}

u64 ToeplitzCode::encode_weight(const BitString& x,
                                u64 memory_budget_bytes) const {
  u64 weight = 0;
  encode_streaming(
      {x}, [&](const BitString& seg) { weight += seg.weight(); },
      memory_budget_bytes);
  return weight;
}

std::string ToeplitzCode::descriptor() const {
  if (!seeded_)
    throw std::logic_error("descriptor: explicit-band codes are not seeded");
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "n=%" PRIu64 " m=%" PRIu64 " rate=%.17g seed=%" PRIu64
                " design_distance=%.17g",
                n_, m_, rate_, seed_, design_distance_);
  return buf;
}

ToeplitzCode ToeplitzCode::from_descriptor(const std::string& line) {
  u64 n = 0, m = 0, seed = 0;
  double rate = 0, design_distance = -1;
  bool have_n = false, have_m = false, have_rate = false, have_seed = false,
       have_dd = false;
  std::istringstream in(line);
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("from_descriptor: malformed token " + token);
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    try {
      if (key == "n") {
        n = std::stoull(value);
        have_n = true;
      } else if (key == "m") {
        m = std::stoull(value);
        have_m = true;
      } else if (key == "rate") {
        rate = std::stod(value);
        have_rate = true;
      } else if (key == "seed") {
        seed = std::stoull(value);
        have_seed = true;
      } else if (key == "design_distance") {
        design_distance = std::stod(value);
        have_dd = true;
      } else {
        throw std::invalid_argument("from_descriptor: unknown key " + key);
      }
    } catch (const std::logic_error&) {
      throw std::invalid_argument("from_descriptor: bad value for " + key);
    }
  }
  if (!(have_n && have_m && have_rate && have_seed && have_dd))
    throw std::invalid_argument("from_descriptor: missing field");
  ToeplitzCode code = new_code(n, rate, design_distance, seed);
  if (code.m() != m)
    throw std::invalid_argument(
        "from_descriptor: m does not match ceil(n / rate)");
  if (code.seed() != seed)
    throw std::invalid_argument(
        "from_descriptor: seed redraw mismatch; descriptor predates rejection");
  return code;
}

double estimate_min_distance_exhaustive(const ToeplitzCode& code) {
  const u64 n = code.n();
  const u64 m = code.m();
  if (n > 24)
    throw std::invalid_argument(
        "estimate_min_distance_exhaustive: n > 24 refused (2^n enumeration)");
  // Gray-code walk: consecutive inputs differ in one bit, so each step XORs
  // a single matrix column into the running codeword.
  const u64 col_words = words_for(m);
  std::vector<std::vector<u64>> columns(n, std::vector<u64>(col_words, 0));
  const BitString fc = code.first_col();
  const BitString fr = code.first_row();
  for (u64 j = 0; j < n; ++j)
    for (u64 i = 0; i < m; ++i) {
      const bool bit = i >= j ? fc.bit(i - j) : fr.bit(j - i);
      if (bit) columns[j][i / 64] |= u64{1} << (i % 64);
    }
  std::vector<u64> cw(col_words, 0);
  u64 best = m;
  u64 prev_gray = 0;
  for (u64 v = 1; v < (u64{1} << n); ++v) {
    const u64 gray = v ^ (v >> 1);
    const unsigned j = std::countr_zero(gray ^ prev_gray);
    prev_gray = gray;
    u64 weight = 0;
    for (u64 w = 0; w < col_words; ++w) {
      cw[w] ^= columns[j][w];
      weight += std::popcount(cw[w]);
    }
    best = std::min(best, weight);
    if (best == 0) break;
  }
  return static_cast<double>(best) / static_cast<double>(m);
}

double estimate_min_distance_sampled(const ToeplitzCode& code, u64 trials,
                                     u64 seed) {
  if (trials == 0)
    throw std::invalid_argument("estimate_min_distance_sampled: zero trials");
  const u64 m = code.m();
  u64 best = m;
  for (u64 trial = 0; trial < trials; ++trial) {
    BitString x(0);
    for (u64 attempt = 0;; ++attempt) {
      x = BitString::random(derive_seed(seed, (trial << 20) + attempt),
                            code.n());
      if (x.weight() > 0) break;
    }
    best = std::min(best, code.encode_weight(x));
    if (best == 0) break;
  }
  return static_cast<double>(best) / static_cast<double>(m);
}

}  // namespace qfp
