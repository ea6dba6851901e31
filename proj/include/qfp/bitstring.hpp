#pragma once

// Packed bit vectors plus the deterministic word stream that seeds every
// random choice in the library.
//
// Bit order convention, fixed once for the whole project and for file I/O:
// logical bit j is bit (j % 64) of word j/64, so bit 0 is the least
// significant bit of word 0.  A file byte k carries logical bits [8k, 8k+8)
// with byte bit i (value >> i & 1) at logical position 8k + i.  to_string()
// prints logical order, bit 0 leftmost: a one-byte file 0x01 read with
// max_bits = 4 prints "1000".

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace qfp {

// SplitMix64 run in counter mode: word i of the stream with seed s is the
// SplitMix64 finalizer applied to s + (i+1) * golden.  Equivalent to seeding
// classic SplitMix64 with s and taking successive outputs, but with O(1)
// random access.  Random access is what keeps the streaming Toeplitz diagonal
// and the per-trial seed derivation deterministic under any evaluation order.
std::uint64_t stream_word(std::uint64_t seed, std::uint64_t index);

// Child stream seed for substream `index` of `seed`.  Mixing the index through
// the finalizer before combining keeps child streams disjoint from the words
// the parent consumes directly.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// Sequential view of a stream, used where consumption order is the natural
// contract (samplers, position shuffles).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next() { return stream_word(seed_, counter_++); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Unbiased integer in [0, bound) by rejection; bound must be nonzero.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

class BitString {
 public:
  BitString() = default;

  // All-zero string of the given length.
  explicit BitString(std::uint64_t length);

  // Adopts words; bits beyond `length` in the last word must be zero and the
  // constructor enforces that by masking.
  BitString(std::vector<std::uint64_t> words, std::uint64_t length);

  // Parses "0110..." in logical order (first character is bit 0).
  static BitString from_string(std::string_view bits);

  // Reads min(8 * file size, max_bits) bits using the byte convention above.
  static BitString from_file(const std::string& path, std::uint64_t max_bits);

  // `length` bits taken from stream_word(seed, 0..): stream word i supplies
  // logical bits [64i, 64i+64).
  static BitString random(std::uint64_t seed, std::uint64_t length);

  std::uint64_t size() const { return length_; }
  bool empty() const { return length_ == 0; }

  bool bit(std::uint64_t i) const;
  void set_bit(std::uint64_t i, bool value);

  std::uint64_t weight() const;

  // Word w zero-padded past the end, so callers can iterate full words.
  std::uint64_t word(std::uint64_t w) const;
  const std::vector<std::uint64_t>& words() const { return words_; }

  BitString operator^(const BitString& other) const;
  bool operator==(const BitString& other) const = default;

  // Concatenates `other` after the current bits (other bit 0 lands at the old
  // size).
  void append(const BitString& other);

  std::string to_string() const;

  // Writes ceil(size/8) bytes; a partial last byte is zero-padded, so
  // whole-byte lengths round-trip exactly through from_file.
  void to_file(const std::string& path) const;

 private:
  std::vector<std::uint64_t> words_;
  std::uint64_t length_ = 0;

  void mask_tail();
};

// Number of positions at which a and b differ; lengths must match.
std::uint64_t hamming_distance(const BitString& a, const BitString& b);

// Copy of `bits` with exactly llround(fraction * size) distinct positions
// flipped, chosen by Floyd's sampling from the seed's stream.  fraction must
// lie in [0, 1].
BitString flip_fraction(const BitString& bits, double fraction,
                        std::uint64_t seed);

// Streams a file's bits in word-aligned chunks of at most chunk_bits
// (rounded up to whole words internally) without materializing the file.
// The callback receives the chunk's words, its bit count, and the logical
// offset of its first bit.  Stops after max_bits.
void for_each_file_chunk(
    const std::string& path, std::uint64_t max_bits, std::uint64_t chunk_bits,
    const std::function<void(const std::uint64_t* words, std::uint64_t nbits,
                             std::uint64_t bit_offset)>& fn);

}  // namespace qfp
