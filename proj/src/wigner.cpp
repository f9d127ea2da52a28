#include "rmtlab/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "rmtlab/errors.hpp"

namespace rmtlab {

double SymMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < n; ++i) t += at(i, i);
  return t;
}

double SymMatrix::frobenius_sq() const {
  double s = 0.0;
  for (double v : a) s += v * v;
  return s;
}

WignerMatrix build_wigner(int n, const EntryLaw& law, std::uint64_t seed,
                          const std::optional<TruncationSpec>& trunc) {
  if (n < 1) throw UsageError("build_wigner needs n >= 1");
  WignerMatrix w{SymMatrix(n), law, seed, trunc};
  RngStream rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  if (trunc) {
    TruncatedLaw tl(law, *trunc, n);
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) w.mat.set_sym(j, k, scale * tl.sample(rng));
  } else {
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) w.mat.set_sym(j, k, scale * law.sample(rng));
  }
  return w;
}

MinorView::MinorView(const SymMatrix& parent, std::vector<int> keep)
    : parent_(&parent), keep_(std::move(keep)) {}

MinorView MinorView::minor(const std::vector<int>& local_deleted) const {
  std::vector<bool> drop(keep_.size(), false);
  for (int i : local_deleted) {
    if (i < 0 || i >= n()) {
      throw IndexOutOfRange("minor index " + std::to_string(i) +
                            " outside view of size " + std::to_string(n()));
    }
    drop[i] = true;
  }
  std::vector<int> keep;
  keep.reserve(keep_.size());
  for (std::size_t i = 0; i < keep_.size(); ++i)
    if (!drop[i]) keep.push_back(keep_[i]);
  return MinorView(*parent_, std::move(keep));
}

SymMatrix MinorView::dense() const {
  SymMatrix m(n());
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) m.at(i, j) = at(i, j);
  return m;
}

MinorView minor(const SymMatrix& m, const std::vector<int>& deleted) {
  std::vector<bool> drop(m.n, false);
  for (int i : deleted) {
    if (i < 0 || i >= m.n) {
      throw IndexOutOfRange("minor index " + std::to_string(i) +
                            " outside matrix of size " + std::to_string(m.n));
    }
    drop[i] = true;
  }
  std::vector<int> keep;
  keep.reserve(m.n);
  for (int i = 0; i < m.n; ++i)
    if (!drop[i]) keep.push_back(i);
  return MinorView(m, std::move(keep));
}

MinorView minor(const WignerMatrix& w, const std::vector<int>& deleted) {
  return minor(w.mat, deleted);
}

namespace {

constexpr char kMagic[4] = {'R', 'M', 'T', 'W'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ofstream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
void get(std::ifstream& is, T& v) {
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
}

}  // namespace

void save_wigner(const WignerMatrix& w, const std::string& path) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + tmp.string() + " for writing");
    os.write(kMagic, 4);
    put(os, kVersion);
    put(os, static_cast<std::uint32_t>(w.n()));
    const std::string law = w.law.id();
    put(os, static_cast<std::uint32_t>(law.size()));
    os.write(law.data(), static_cast<std::streamsize>(law.size()));
    put(os, w.seed);
    const std::uint8_t has_trunc = w.trunc ? 1 : 0;
    put(os, has_trunc);
    if (w.trunc) {
      put(os, w.trunc->d_const);
      put(os, w.trunc->kappa);
    }
    for (int j = 0; j < w.n(); ++j)
      for (int k = j; k < w.n(); ++k) put(os, w.mat.at(j, k));
    if (!os) throw IoError("short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

WignerMatrix load_wigner(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) {
    throw IoError(path + " is not a matrix file");
  }
  std::uint32_t version = 0;
  get(is, version);
  if (version != kVersion) {
    throw IoError("unsupported matrix file version " + std::to_string(version));
  }
  std::uint32_t n = 0;
  get(is, n);
  std::uint32_t law_len = 0;
  get(is, law_len);
  std::string law_id(law_len, '\0');
  is.read(law_id.data(), law_len);
  std::uint64_t seed = 0;
  get(is, seed);
  std::uint8_t has_trunc = 0;
  get(is, has_trunc);
  std::optional<TruncationSpec> trunc;
  if (has_trunc) {
    TruncationSpec t;
    get(is, t.d_const);
    get(is, t.kappa);
    trunc = t;
  }
  WignerMatrix w{SymMatrix(static_cast<int>(n)), EntryLaw::parse(law_id), seed,
                 trunc};
  for (int j = 0; j < w.n(); ++j)
    for (int k = j; k < w.n(); ++k) {
      double v = 0.0;
      get(is, v);
      w.mat.set_sym(j, k, v);
    }
  if (!is) throw IoError("truncated matrix file " + path);
  return w;
}

}  // namespace rmtlab
