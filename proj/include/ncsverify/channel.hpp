#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ncsverify {

/// Success count and length of a packet trace. Every interval and verdict in
/// the library depends on a trace only through these two numbers.
struct SuccessCount {
  std::uint64_t successes = 0;
  std::uint64_t total = 0;
};

/// Ordered packet outcomes from one channel (1 = delivered, 0 = dropped).
class ChannelTrace {
 public:
  ChannelTrace() = default;
  /// Throws InputError if any outcome is not 0 or 1.
  explicit ChannelTrace(std::vector<std::uint8_t> outcomes, std::uint64_t seed = 0,
                        std::optional<double> true_rate = std::nullopt);

  const std::vector<std::uint8_t>& outcomes() const { return outcomes_; }
  std::size_t size() const { return outcomes_.size(); }
  bool empty() const { return outcomes_.empty(); }
  std::uint64_t seed() const { return seed_; }
  std::optional<double> true_rate() const { return true_rate_; }

  /// Counts over the whole trace. Throws InputError on an empty trace.
  SuccessCount count() const;
  /// Counts over the first n outcomes; n must be in [1, size()].
  SuccessCount prefix_count(std::size_t n) const;
  /// The first n outcomes as a new trace (same seed and rate metadata).
  ChannelTrace prefix(std::size_t n) const;

 private:
  std::vector<std::uint8_t> outcomes_;
  std::uint64_t seed_ = 0;
  std::optional<double> true_rate_;
};

/// Counter-based uniform stream: the i-th draw depends only on (seed, i), so
/// any prefix of a longer stream equals the shorter stream.
class CounterStream {
 public:
  explicit CounterStream(std::uint64_t seed) : seed_(seed) {}
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform(std::uint64_t index) const;
  std::uint64_t bits(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
};

/// SplitMix64 finalizer; used for counter streams and per-trial seed splitting.
std::uint64_t mix64(std::uint64_t x);
/// Derives an independent seed for sub-stream `index` of `seed`.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index);

/// n i.i.d. Bernoulli(q) outcomes; outcome k is 1 iff uniform(k) < q.
ChannelTrace draw_trace(double q, std::size_t n, std::uint64_t seed);

/// Fraction of delivered packets. Throws InputError on an empty trace.
double sample_mean(const ChannelTrace& trace);
double sample_mean(SuccessCount c);

// Trace text format:
//   n=<N> q=<rate|unknown> seed=<u64>
//   0110...   (N characters, optionally wrapped; whitespace ignored)
void write_trace(std::ostream& out, const ChannelTrace& trace);
ChannelTrace read_trace(std::istream& in);
ChannelTrace load_trace_file(const std::string& path);

/// Parses either a file path or a generator spec of the form "gen:q,n,seed".
ChannelTrace resolve_trace(const std::string& source);

}  // namespace ncsverify
