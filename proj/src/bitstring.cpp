#include "qfp/bitstring.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <unordered_set>

namespace qfp {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t words_for(std::uint64_t bits) { return (bits + 63) / 64; }

}  // namespace

std::uint64_t stream_word(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed + (index + 1) * kGolden);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ mix64(index + kGolden));
}

std::uint64_t CounterRng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("CounterRng::below: bound == 0");
  // Largest multiple of bound that fits in 64 bits; draws at or above it
  // would bias the remainder.
  const std::uint64_t limit = bound * (~0ull / bound);
  for (;;) {
    const std::uint64_t w = next();
    if (w < limit) return w % bound;
  }
}

BitString::BitString(std::uint64_t length)
    : words_(words_for(length), 0), length_(length) {}

BitString::BitString(std::vector<std::uint64_t> words, std::uint64_t length)
    : words_(std::move(words)), length_(length) {
  if (words_.size() != words_for(length_))
    throw std::invalid_argument("BitString: word count does not match length");
  mask_tail();
}

void BitString::mask_tail() {
  const std::uint64_t rem = length_ % 64;
  if (rem != 0 && !words_.empty()) words_.back() &= (~0ull >> (64 - rem));
}

BitString BitString::from_string(std::string_view bits) {
  BitString out(static_cast<std::uint64_t>(bits.size()));
  for (std::uint64_t i = 0; i < bits.size(); ++i) {
    const char c = bits[i];
    if (c != '0' && c != '1')
      throw std::invalid_argument("BitString::from_string: expected 0 or 1");
    if (c == '1') out.set_bit(i, true);
  }
  return out;
}

BitString BitString::from_file(const std::string& path,
                               std::uint64_t max_bits) {
  std::error_code ec;
  const std::uintmax_t fsize = std::filesystem::file_size(path, ec);
  if (ec) throw std::runtime_error("cannot stat file: " + path);
  BitString out;
  out.words_.reserve(
      words_for(std::min<std::uint64_t>(max_bits, 8 * fsize)));
  std::uint64_t got = 0;
  for_each_file_chunk(path, max_bits, 1ull << 22,
                      [&](const std::uint64_t* w, std::uint64_t nbits,
                          std::uint64_t offset) {
                        out.words_.resize(words_for(offset + nbits), 0);
                        // Chunks are word-aligned, so a plain copy lands right.
                        for (std::uint64_t i = 0; i < words_for(nbits); ++i)
                          out.words_[offset / 64 + i] = w[i];
                        got = offset + nbits;
                      });
  out.length_ = got;
  out.words_.resize(words_for(got));
  out.mask_tail();
  return out;
}

BitString BitString::random(std::uint64_t seed, std::uint64_t length) {
  std::vector<std::uint64_t> words(words_for(length));
  for (std::uint64_t i = 0; i < words.size(); ++i)
    words[i] = stream_word(seed, i);
  return BitString(std::move(words), length);
}

bool BitString::bit(std::uint64_t i) const {
  if (i >= length_) throw std::out_of_range("BitString::bit: index past end");
  return (words_[i / 64] >> (i % 64)) & 1;
}

void BitString::set_bit(std::uint64_t i, bool value) {
  if (i >= length_)
    throw std::out_of_range("BitString::set_bit: index past end");
  const std::uint64_t mask = 1ull << (i % 64);
  if (value)
    words_[i / 64] |= mask;
  else
    words_[i / 64] &= ~mask;
}

std::uint64_t BitString::weight() const {
  std::uint64_t total = 0;
  for (std::uint64_t w : words_) total += std::popcount(w);
  return total;
}

std::uint64_t BitString::word(std::uint64_t w) const {
  return w < words_.size() ? words_[w] : 0;
}

BitString BitString::operator^(const BitString& other) const {
  if (length_ != other.length_)
    throw std::invalid_argument("BitString::operator^: length mismatch");
  std::vector<std::uint64_t> words(words_.size());
  for (std::uint64_t i = 0; i < words.size(); ++i)
    words[i] = words_[i] ^ other.words_[i];
  return BitString(std::move(words), length_);
}

void BitString::append(const BitString& other) {
  const std::uint64_t offset = length_;
  length_ += other.length_;
  words_.resize(words_for(length_), 0);
  const unsigned shift = offset % 64;
  const std::uint64_t base = offset / 64;
  for (std::uint64_t w = 0; w < words_for(other.length_); ++w) {
    const std::uint64_t v = other.words_[w];
    words_[base + w] |= v << shift;
    if (shift != 0 && base + w + 1 < words_.size())
      words_[base + w + 1] |= v >> (64 - shift);
  }
}

std::string BitString::to_string() const {
  std::string s(length_, '0');
  for (std::uint64_t i = 0; i < length_; ++i)
    if (bit(i)) s[i] = '1';
  return s;
}

void BitString::to_file(const std::string& path) const {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("BitString::to_file: cannot open " + path);
  const std::uint64_t nbytes = (length_ + 7) / 8;
  for (std::uint64_t k = 0; k < nbytes; ++k) {
    const unsigned char byte =
        static_cast<unsigned char>(word(k / 8) >> (8 * (k % 8)));
    if (std::fputc(byte, f) == EOF) {
      std::fclose(f);
      throw std::runtime_error("BitString::to_file: write failed: " + path);
    }
  }
  if (std::fclose(f) != 0)
    throw std::runtime_error("BitString::to_file: close failed: " + path);
}

std::uint64_t hamming_distance(const BitString& a, const BitString& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("hamming_distance: length mismatch");
  std::uint64_t total = 0;
  for (std::uint64_t i = 0; i < a.words().size(); ++i)
    total += std::popcount(a.words()[i] ^ b.words()[i]);
  return total;
}

BitString flip_fraction(const BitString& bits, double fraction,
                        std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0))
    throw std::invalid_argument("flip_fraction: fraction outside [0, 1]");
  const std::uint64_t n = bits.size();
  const std::uint64_t k = static_cast<std::uint64_t>(
      std::llround(fraction * static_cast<double>(n)));
  BitString out = bits;
  if (k == 0) return out;
  // Floyd's sampling: exactly k distinct positions, O(k) expected draws.
  CounterRng rng(seed);
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(k * 2);
  for (std::uint64_t j = n - k; j < n; ++j) {
    const std::uint64_t t = rng.below(j + 1);
    const std::uint64_t pos = chosen.insert(t).second ? t : j;
    if (pos != t) chosen.insert(pos);
    out.set_bit(pos, !out.bit(pos));
  }
  return out;
}

void for_each_file_chunk(
    const std::string& path, std::uint64_t max_bits, std::uint64_t chunk_bits,
    const std::function<void(const std::uint64_t*, std::uint64_t,
                             std::uint64_t)>& fn) {
  if (chunk_bits < 64) chunk_bits = 64;
  const std::uint64_t chunk_words = words_for(chunk_bits);
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("cannot open file: " + path);
  std::vector<unsigned char> buf(chunk_words * 8);
  std::vector<std::uint64_t> words(chunk_words);
  std::uint64_t offset = 0;
  while (offset < max_bits) {
    const std::uint64_t want_bits = std::min(chunk_words * 64, max_bits - offset);
    const std::size_t want_bytes = static_cast<std::size_t>((want_bits + 7) / 8);
    const std::size_t got_bytes = std::fread(buf.data(), 1, want_bytes, f);
    if (got_bytes == 0) break;
    std::uint64_t nbits = std::min<std::uint64_t>(8 * got_bytes, want_bits);
    const std::uint64_t nwords = words_for(nbits);
    for (std::uint64_t w = 0; w < nwords; ++w) {
      std::uint64_t v = 0;
      for (int b = 7; b >= 0; --b) {
        const std::size_t idx = w * 8 + static_cast<std::size_t>(b);
        v = (v << 8) | (idx < got_bytes ? buf[idx] : 0);
      }
      words[w] = v;
    }
    // Mask bits past the requested count in the final partial word.
    if (nbits % 64 != 0) words[nwords - 1] &= ~0ull >> (64 - nbits % 64);
    fn(words.data(), nbits, offset);
    offset += nbits;
    if (got_bytes < want_bytes) break;
  }
  std::fclose(f);
}

}  // namespace qfp
