#include "pdmp/chain_io.hpp"

#include "pdmp/error.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/core.h>

namespace pdmp {

namespace {

constexpr const char* kMagic = "# pdmp-chain v1";

double
parse_double(const std::string& s, std::size_t line)
{
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw FormatError(fmt::format("chain line {}: '{}' is not a number", line, s));
  }
  return v;
}

} // namespace

void
write_chain(std::ostream& out, const JumpChain& chain)
{
  const bool with_times =
    chain.times.has_value() && chain.times->size() == chain.transitions();
  out << kMagic << '\n';
  out << "# model: " << chain.model << '\n';
  if (chain.seed) {
    out << "# seed: " << *chain.seed << '\n';
  }
  out << "# transitions: " << chain.transitions() << '\n';
  out << "# columns: " << (with_times ? "z t" : "z") << '\n';
  for (std::size_t k = 0; k < chain.z.size(); ++k) {
    if (with_times) {
      const double t = k == 0 ? 0.0 : (*chain.times)[k - 1];
      out << fmt::format("{:.17g}\t{:.17g}\n", chain.z[k], t);
    } else {
      out << fmt::format("{:.17g}\n", chain.z[k]);
    }
  }
}

JumpChain
read_chain(std::istream& in)
{
  JumpChain chain;
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::size_t> declared;
  bool with_times = false;
  bool magic = false;
  std::vector<double> times;

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    if (line[0] == '#') {
      if (line == kMagic) {
        magic = true;
      } else if (line.rfind("# model: ", 0) == 0) {
        chain.model = line.substr(9);
      } else if (line.rfind("# seed: ", 0) == 0) {
        const std::string s = line.substr(8);
        std::uint64_t seed = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
        if (ec != std::errc() || ptr != s.data() + s.size()) {
          throw FormatError(fmt::format("chain line {}: bad seed '{}'", lineno, s));
        }
        chain.seed = seed;
      } else if (line.rfind("# transitions: ", 0) == 0) {
        declared = static_cast<std::size_t>(parse_double(line.substr(15), lineno));
      } else if (line.rfind("# columns: ", 0) == 0) {
        const std::string cols = line.substr(11);
        if (cols == "z t") {
          with_times = true;
        } else if (cols != "z") {
          throw FormatError(
            fmt::format("chain line {}: unknown columns '{}'", lineno, cols));
        }
      }
      continue;
    }
    if (!magic) {
      throw FormatError("not a pdmp chain file (missing header)");
    }
    std::istringstream row(line);
    std::string a, b, extra;
    row >> a;
    if (with_times) {
      row >> b;
      if (b.empty()) {
        throw FormatError(fmt::format("chain line {}: missing time column", lineno));
      }
    }
    if (row >> extra) {
      throw FormatError(fmt::format("chain line {}: too many columns", lineno));
    }
    const double z = parse_double(a, lineno);
    if (!(z > 0.0)) {
      throw FormatError(fmt::format("chain line {}: state {} is not > 0", lineno, z));
    }
    chain.z.push_back(z);
    if (with_times) {
      const double t = parse_double(b, lineno);
      if (chain.z.size() > 1) {
        times.push_back(t);
      }
    }
  }
  if (!magic) {
    throw FormatError("not a pdmp chain file (missing header)");
  }
  if (chain.z.size() < 2) {
    throw FormatError("chain file holds fewer than two states");
  }
  if (declared && *declared != chain.transitions()) {
    throw FormatError(fmt::format("chain file declares {} transitions but holds {}",
                                  *declared,
                                  chain.transitions()));
  }
  if (with_times) {
    chain.times = std::move(times);
  }
  return chain;
}

void
save_chain(const std::filesystem::path& path, const JumpChain& chain)
{
  std::ofstream out(path);
  if (!out) {
    throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  }
  write_chain(out, chain);
  if (!out) {
    throw IoError(fmt::format("write to '{}' failed", path.string()));
  }
}

JumpChain
load_chain(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) {
    throw IoError(fmt::format("cannot open '{}'", path.string()));
  }
  return read_chain(in);
}

} // namespace pdmp
