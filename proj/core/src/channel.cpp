#include "hprec/channel.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "hprec/error.hpp"
#include "hprec/random.hpp"

namespace hprec {

void SystemDims::validate() const {
  require(bands >= 1, ErrorCode::InvalidArgument, "B must be >= 1");
  require(users >= 1, ErrorCode::InvalidArgument, "N must be >= 1");
  require(rf_chains >= 1, ErrorCode::InvalidArgument, "L must be >= 1");
  require(rf_chains <= antennas, ErrorCode::InvalidArgument, "L must not exceed M");
  require(std::isfinite(noise_var) && noise_var > 0.0, ErrorCode::InvalidArgument, "noise variance must be > 0");
}

void ChannelSet::validate() const {
  dims.validate();
  require(static_cast<int>(bands.size()) == dims.bands, ErrorCode::DimensionMismatch, "band count differs from B");
  for (const auto& h : bands) {
    require(h.rows() == dims.users && h.cols() == dims.antennas, ErrorCode::DimensionMismatch,
            "sub-channel must be N x M");
  }
}

ChannelDataset gen_rayleigh(const SystemDims& dims, int count, std::uint64_t seed) {
  dims.validate();
  require(count >= 1, ErrorCode::InvalidArgument, "gen_rayleigh: count must be >= 1");
  Rng rng = make_rng(seed);
  ChannelDataset ds{dims, {}, seed};
  ds.realizations.reserve(static_cast<std::size_t>(count));
  for (int r = 0; r < count; ++r) {
    ChannelSet cs{dims, {}, false};
    cs.bands.reserve(static_cast<std::size_t>(dims.bands));
    for (int b = 0; b < dims.bands; ++b) cs.bands.push_back(complex_gaussian(dims.users, dims.antennas, rng));
    ds.realizations.push_back(std::move(cs));
  }
  return ds;
}

ChannelSet normalize(const ChannelSet& cs) {
  if (cs.normalized) fail(ErrorCode::AlreadyNormalized, "channel set is already normalized");
  cs.dims.validate();
  const double scale = std::sqrt(1.0 / (cs.dims.users * cs.dims.noise_var));
  ChannelSet out{cs.dims, {}, true};
  out.bands.reserve(cs.bands.size());
  for (const auto& h : cs.bands) out.bands.push_back(h * scale);
  return out;
}

ChannelDataset normalize(const ChannelDataset& ds) {
  ChannelDataset out{ds.dims, {}, ds.seed};
  out.realizations.reserve(ds.size());
  for (const auto& cs : ds.realizations) out.realizations.push_back(normalize(cs));
  return out;
}

ChannelDataset with_noise_var(ChannelDataset ds, double noise_var) {
  ds.dims.noise_var = noise_var;
  ds.dims.validate();
  for (auto& cs : ds.realizations) {
    if (cs.normalized) fail(ErrorCode::AlreadyNormalized, "noise variance can only be changed on raw channels");
    cs.dims.noise_var = noise_var;
  }
  return ds;
}

ChannelDataset with_rf_chains(ChannelDataset ds, int rf_chains) {
  ds.dims.rf_chains = rf_chains;
  ds.dims.validate();
  for (auto& cs : ds.realizations) cs.dims.rf_chains = rf_chains;
  return ds;
}

ErrorSet sample_error_set(const SystemDims& dims, double epsilon, int n_e, std::uint64_t seed) {
  dims.validate();
  require(std::isfinite(epsilon) && epsilon > 0.0, ErrorCode::InvalidArgument, "epsilon must be > 0");
  require(n_e >= 0, ErrorCode::InvalidArgument, "n_e must be >= 0");
  Rng rng = make_rng(seed);
  ErrorSet es{dims, epsilon, {}};
  es.patterns.reserve(static_cast<std::size_t>(n_e) + 1);
  es.patterns.emplace_back(static_cast<std::size_t>(dims.bands), CMatrix::Zero(dims.users, dims.antennas));
  for (int t = 0; t < n_e; ++t) {
    std::vector<CMatrix> pattern;
    pattern.reserve(static_cast<std::size_t>(dims.bands));
    for (int b = 0; b < dims.bands; ++b) {
      CMatrix e;
      double norm = 0.0;
      do {
        const CMatrix g = complex_gaussian(dims.users, dims.antennas, rng);
        const double radius = open_unit(rng) * epsilon;
        e = g * (radius / g.norm());
        norm = e.norm();
      } while (!(norm > 0.0 && norm < epsilon));
      pattern.push_back(std::move(e));
    }
    es.patterns.push_back(std::move(pattern));
  }
  return es;
}

// ---------------------------------------------------------------------------
// Binary format

namespace {

constexpr std::array<char, 4> kMagic{'H', 'P', 'C', 'H'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 4 + 4 + 1 + 4 * 4 + 8 + 8;

class Writer {
 public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void raw(const char* p, std::size_t n) { buf_.insert(buf_.end(), p, p + n); }
  const std::string& bytes() const { return buf_; }

 private:
  void le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
  }
  std::string buf_;
};

class Reader {
 public:
  explicit Reader(std::string bytes) : buf_(std::move(bytes)) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }
  double f64() { return std::bit_cast<double>(u64()); }
  const char* take(std::size_t n) {
    if (buf_.size() - pos_ < n) fail(ErrorCode::FormatError, "truncated dataset file");
    const char* p = buf_.data() + pos_;
    pos_ += n;
    return p;
  }
  std::size_t remaining() const { return buf_.size() - pos_; }

 private:
  std::uint64_t le(int n) {
    const char* p = take(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    return v;
  }
  std::string buf_;
  std::size_t pos_ = 0;
};

}  // namespace

void save_dataset(const ChannelDataset& ds, const std::filesystem::path& path) {
  require(!ds.realizations.empty(), ErrorCode::EmptyDataset, "save_dataset: no realizations");
  const SystemDims& d = ds.dims;
  Writer w;
  w.raw(kMagic.data(), kMagic.size());
  w.u32(kVersion);
  w.u8(ds.normalized() ? 1 : 0);
  w.u32(static_cast<std::uint32_t>(ds.size()));
  w.u32(static_cast<std::uint32_t>(d.bands));
  w.u32(static_cast<std::uint32_t>(d.users));
  w.u32(static_cast<std::uint32_t>(d.antennas));
  w.f64(d.noise_var);
  w.u64(ds.seed);
  for (const auto& cs : ds.realizations) {
    require(cs.normalized == ds.normalized(), ErrorCode::InvalidArgument, "mixed normalized flags");
    require(static_cast<int>(cs.bands.size()) == d.bands, ErrorCode::DimensionMismatch, "band count differs");
    for (const auto& h : cs.bands) {
      require(h.rows() == d.users && h.cols() == d.antennas, ErrorCode::DimensionMismatch, "band shape differs");
      for (Eigen::Index i = 0; i < h.rows(); ++i) {
        for (Eigen::Index j = 0; j < h.cols(); ++j) {
          w.f64(h(i, j).real());
          w.f64(h(i, j).imag());
        }
      }
    }
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
  if (!out) fail(ErrorCode::IoError, "write failed for '" + path.string() + "'");
}

ChannelDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) fail(ErrorCode::IoError, "read failed for '" + path.string() + "'");
  if (bytes.size() < kHeaderBytes) fail(ErrorCode::FormatError, "truncated header");

  Reader r(std::move(bytes));
  if (std::memcmp(r.take(4), kMagic.data(), 4) != 0) fail(ErrorCode::FormatError, "bad magic");
  const std::uint32_t version = r.u32();
  if (version != kVersion) fail(ErrorCode::FormatError, "unsupported version " + std::to_string(version));
  const std::uint8_t flag = r.u8();
  if (flag > 1) fail(ErrorCode::FormatError, "normalized flag must be 0 or 1");
  const std::uint32_t count = r.u32();
  SystemDims d;
  d.bands = static_cast<int>(r.u32());
  d.users = static_cast<int>(r.u32());
  d.antennas = static_cast<int>(r.u32());
  d.rf_chains = d.antennas;
  d.noise_var = r.f64();
  const std::uint64_t seed = r.u64();
  if (count == 0 || d.bands < 1 || d.users < 1 || d.antennas < 1 || !(d.noise_var > 0.0)) {
    fail(ErrorCode::FormatError, "invalid header fields");
  }

  const std::uint64_t entries = std::uint64_t{count} * static_cast<std::uint64_t>(d.bands) *
                                static_cast<std::uint64_t>(d.users) * static_cast<std::uint64_t>(d.antennas);
  if (r.remaining() != entries * 16) {
    fail(ErrorCode::FormatError, r.remaining() < entries * 16 ? "truncated payload" : "trailing bytes after payload");
  }

  ChannelDataset ds{d, {}, seed};
  ds.realizations.reserve(count);
  for (std::uint32_t k = 0; k < count; ++k) {
    ChannelSet cs{d, {}, flag == 1};
    for (int b = 0; b < d.bands; ++b) {
      CMatrix h(d.users, d.antennas);
      for (int i = 0; i < d.users; ++i) {
        for (int j = 0; j < d.antennas; ++j) {
          const double re = r.f64();
          const double im = r.f64();
          h(i, j) = cd(re, im);
        }
      }
      cs.bands.push_back(std::move(h));
    }
    ds.realizations.push_back(std::move(cs));
  }
  return ds;
}

std::pair<ChannelDataset, ChannelDataset> split(const ChannelDataset& ds, int train_count) {
  if (train_count <= 0 || static_cast<std::size_t>(train_count) >= ds.size()) {
    fail(ErrorCode::BadSplit, "train_count must satisfy 0 < train_count < " + std::to_string(ds.size()));
  }
  ChannelDataset train{ds.dims, {}, ds.seed};
  ChannelDataset test{ds.dims, {}, ds.seed};
  const auto mid = ds.realizations.begin() + train_count;
  train.realizations.assign(ds.realizations.begin(), mid);
  test.realizations.assign(mid, ds.realizations.end());
  return {std::move(train), std::move(test)};
}

}  // namespace hprec
