#include "windfuse/dictionary_learning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "windfuse/rng.hpp"

namespace windfuse {

double default_sparsity_weight(Eigen::Index num_bins) {
  return 1.0 / std::sqrt(static_cast<double>(num_bins));
}

void TrainConfig::validate() const {
  if (num_atoms < 1) throw ValidationError("train: num_atoms must be >= 1");
  if (outer_iters < 1) throw ValidationError("train: outer_iters must be >= 1");
  if (inner_iters < 1) throw ValidationError("train: inner_iters must be >= 1");
}

namespace {

std::vector<Eigen::Index> nonzero_frames(const CMat& data) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index t = 0; t < data.cols(); ++t)
    if (data.col(t).squaredNorm() > 0.0) idx.push_back(t);
  return idx;
}

CVec normalized_frame(const CMat& data, Eigen::Index t) {
  CVec col = data.col(t);
  return col / col.norm();
}

}  // namespace

CMat init_dictionary(const Spectrogram& s, int num_atoms, std::uint64_t seed) {
  if (num_atoms < 1) throw ValidationError("init_dictionary: num_atoms must be >= 1");
  if (s.frames() < 1) throw ValidationError("init_dictionary: empty spectrogram");
  const auto usable = nonzero_frames(s.data);
  if (usable.empty())
    throw ValidationError("init_dictionary: all training frames are zero");

  Rng rng(seed);
  const auto n = static_cast<Eigen::Index>(num_atoms);
  CMat dict(s.bins(), n);
  if (static_cast<Eigen::Index>(usable.size()) >= n) {
    // Distinct frames: partial Fisher-Yates over the usable indices.
    std::vector<Eigen::Index> pool = usable;
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto pick = static_cast<std::size_t>(j) +
                        static_cast<std::size_t>(rng.integer(pool.size() - static_cast<std::size_t>(j)));
      std::swap(pool[static_cast<std::size_t>(j)], pool[pick]);
      dict.col(j) = normalized_frame(s.data, pool[static_cast<std::size_t>(j)]);
    }
  } else {
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto pick = usable[static_cast<std::size_t>(rng.integer(usable.size()))];
      dict.col(j) = normalized_frame(s.data, pick);
    }
  }
  return dict;
}

CMat least_squares_dictionary(const CMat& spectrum, const CMat& code) {
  if (code.cols() != spectrum.cols())
    throw ValidationError("dictionary_update: code/spectrum column mismatch");
  if (code.squaredNorm() == 0.0)
    throw ValidationError("dictionary_update: all-zero code");

  const Eigen::Index n = code.rows();
  CMat gram = code * code.adjoint();
  gram = (gram + gram.adjoint()) * 0.5;

  auto solve = [&](const CMat& g) -> CMat {
    Eigen::LDLT<CMat> ldlt(g);
    // D = S C^H G^{-1}  computed as  (G^{-1} (C S^H))^H.
    CMat rhs = code * spectrum.adjoint();
    CMat xt = ldlt.solve(rhs);
    return xt.adjoint();
  };

  Eigen::LDLT<CMat> probe(gram);
  bool well_conditioned = probe.info() == Eigen::Success;
  if (well_conditioned) {
    const auto d = probe.vectorD();
    const double dmax = d.maxCoeff();
    const double dmin = d.minCoeff();
    well_conditioned = dmax > 0.0 && dmin > 1e-12 * dmax;
  }
  if (!well_conditioned) {
    const double ridge = 1e-10 * gram.trace().real() / static_cast<double>(n);
    gram.diagonal().array() += Complex(ridge, 0.0);
  }
  CMat dict = solve(gram);
  if (!dict.allFinite()) {
    const double ridge = 1e-10 * gram.trace().real() / static_cast<double>(n);
    gram.diagonal().array() += Complex(ridge, 0.0);
    dict = solve(gram);
  }
  return dict;
}

CMat dictionary_update(const CMat& spectrum, const CMat& code) {
  CMat dict = least_squares_dictionary(spectrum, code);
  for (Eigen::Index j = 0; j < dict.cols(); ++j) {
    const double norm = dict.col(j).norm();
    if (norm > 0.0) dict.col(j) /= norm;
  }
  return dict;
}

Dictionary train_dictionary(const Spectrogram& s, const TrainConfig& cfg,
                            DictionaryKind kind) {
  cfg.validate();
  if (s.data.squaredNorm() == 0.0)
    throw ValidationError("train_dictionary: zero training spectrogram");

  const double lambda =
      cfg.lambda >= 0.0 ? cfg.lambda : default_sparsity_weight(s.bins());
  const auto usable = nonzero_frames(s.data);
  Rng reseed_rng = Rng(cfg.seed).fork(1);

  CMat dict = init_dictionary(s, cfg.num_atoms, cfg.seed);
  CMat code = CMat::Zero(dict.cols(), s.frames());
  for (int outer = 0; outer < cfg.outer_iters; ++outer) {
    code = sparse_code(s.data, dict, lambda, code, cfg.inner_iters, cfg.solver);
    dict = dictionary_update(s.data, code);
    // Atoms with an all-zero code row come back as zero columns; replace
    // them with fresh training frames so all N atoms stay live.
    for (Eigen::Index j = 0; j < dict.cols(); ++j) {
      if (code.row(j).squaredNorm() == 0.0 || dict.col(j).squaredNorm() == 0.0) {
        const auto pick = usable[static_cast<std::size_t>(reseed_rng.integer(usable.size()))];
        dict.col(j) = normalized_frame(s.data, pick);
      }
    }
  }
  return Dictionary{std::move(dict), kind};
}

}  // namespace windfuse
