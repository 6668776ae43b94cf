#include "ncsverify/channel.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ncsverify/errors.hpp"

namespace ncsverify {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ mix64(index + 0x632be59bd9b4e019ULL));
}

std::uint64_t CounterStream::bits(std::uint64_t index) const {
  // Two rounds so that neighbouring seeds do not produce shifted streams.
  return mix64(mix64(seed_) + index * 0xd1b54a32d192ed03ULL);
}

double CounterStream::uniform(std::uint64_t index) const {
  return static_cast<double>(bits(index) >> 11) * 0x1.0p-53;
}

ChannelTrace::ChannelTrace(std::vector<std::uint8_t> outcomes, std::uint64_t seed,
                           std::optional<double> true_rate)
    : outcomes_(std::move(outcomes)), seed_(seed), true_rate_(true_rate) {
  for (auto v : outcomes_) {
    if (v > 1) throw InputError("trace outcomes must be 0 or 1");
  }
}

SuccessCount ChannelTrace::count() const {
  if (outcomes_.empty()) throw InputError("empty channel trace");
  return prefix_count(outcomes_.size());
}

SuccessCount ChannelTrace::prefix_count(std::size_t n) const {
  if (n == 0 || n > outcomes_.size()) {
    throw InputError("prefix length " + std::to_string(n) + " outside [1, " +
                     std::to_string(outcomes_.size()) + "]");
  }
  const auto k = std::count(outcomes_.begin(), outcomes_.begin() + static_cast<std::ptrdiff_t>(n),
                            std::uint8_t{1});
  return {static_cast<std::uint64_t>(k), n};
}

ChannelTrace ChannelTrace::prefix(std::size_t n) const {
  if (n == 0 || n > outcomes_.size()) throw InputError("prefix length out of range");
  return ChannelTrace({outcomes_.begin(), outcomes_.begin() + static_cast<std::ptrdiff_t>(n)},
                      seed_, true_rate_);
}

ChannelTrace draw_trace(double q, std::size_t n, std::uint64_t seed) {
  if (!(q >= 0.0 && q <= 1.0)) throw InputError("success rate must lie in [0, 1]");
  if (n == 0) throw InputError("trace length must be positive");
  const CounterStream stream(seed);
  std::vector<std::uint8_t> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = stream.uniform(k) < q ? 1 : 0;
  return ChannelTrace(std::move(out), seed, q);
}

double sample_mean(SuccessCount c) {
  if (c.total == 0) throw InputError("empty channel trace");
  if (c.successes > c.total) throw InputError("success count exceeds trace length");
  return static_cast<double>(c.successes) / static_cast<double>(c.total);
}

double sample_mean(const ChannelTrace& trace) { return sample_mean(trace.count()); }

void write_trace(std::ostream& out, const ChannelTrace& trace) {
  out << "n=" << trace.size() << " q=";
  if (trace.true_rate()) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, *trace.true_rate());
    out << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
  } else {
    out << "unknown";
  }
  out << " seed=" << trace.seed() << '\n';
  const auto& o = trace.outcomes();
  for (std::size_t i = 0; i < o.size(); ++i) {
    out << (o[i] ? '1' : '0');
    if ((i + 1) % 80 == 0 || i + 1 == o.size()) out << '\n';
  }
}

namespace {

std::string header_value(const std::string& token, const std::string& key) {
  const std::string prefix = key + "=";
  if (token.rfind(prefix, 0) != 0) {
    throw InputError("trace header: expected '" + prefix + "...', got '" + token + "'");
  }
  return token.substr(prefix.size());
}

template <typename T>
T parse_number(const std::string& s, const char* what) {
  T value{};
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw InputError(std::string("trace header: bad ") + what + " '" + s + "'");
  }
  return value;
}

}  // namespace

ChannelTrace read_trace(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw InputError("trace file: missing header");
  std::istringstream hs(header);
  std::string tn, tq, ts, extra;
  if (!(hs >> tn >> tq >> ts) || (hs >> extra)) {
    throw InputError("trace header must be 'n=<N> q=<rate|unknown> seed=<u64>'");
  }
  const auto n = parse_number<std::uint64_t>(header_value(tn, "n"), "n");
  const auto qs = header_value(tq, "q");
  std::optional<double> rate;
  if (qs != "unknown") {
    try {
      std::size_t used = 0;
      rate = std::stod(qs, &used);
      if (used != qs.size()) throw InputError("");
    } catch (const std::exception&) {
      throw InputError("trace header: bad q '" + qs + "'");
    }
    if (!(*rate >= 0.0 && *rate <= 1.0)) throw InputError("trace header: q outside [0, 1]");
  }
  const auto seed = parse_number<std::uint64_t>(header_value(ts, "seed"), "seed");

  std::vector<std::uint8_t> outcomes;
  outcomes.reserve(n);
  char ch = 0;
  while (in.get(ch)) {
    if (ch == '0' || ch == '1') {
      outcomes.push_back(static_cast<std::uint8_t>(ch - '0'));
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      throw InputError(std::string("trace body: unexpected character '") + ch + "'");
    }
  }
  if (outcomes.size() != n) {
    throw InputError("trace body holds " + std::to_string(outcomes.size()) +
                     " outcomes, header says " + std::to_string(n));
  }
  if (n == 0) throw InputError("trace file holds no outcomes");
  return ChannelTrace(std::move(outcomes), seed, rate);
}

ChannelTrace load_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open trace file '" + path + "'");
  return read_trace(in);
}

ChannelTrace resolve_trace(const std::string& source) {
  if (source.rfind("gen:", 0) != 0) return load_trace_file(source);
  std::string rest = source.substr(4);
  std::replace(rest.begin(), rest.end(), ',', ' ');
  std::istringstream ss(rest);
  double q = 0;
  std::uint64_t n = 0, seed = 0;
  std::string extra;
  if (!(ss >> q >> n >> seed) || (ss >> extra)) {
    throw InputError("generator spec must be 'gen:q,n,seed'");
  }
  return draw_trace(q, n, seed);
}

}  // namespace ncsverify
