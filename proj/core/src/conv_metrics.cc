#include "emoint/conv_metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "emoint/csv.h"
#include "emoint/error.h"

namespace emoint {

McepSequence Mcep(const Waveform& wave, const McepConfig& config) {
  if (config.order < 1 || config.order >= config.n_bands) {
    throw Error(ErrorCode::kInvalidParams,
                "MCEP order must be in [1, " + std::to_string(config.n_bands - 1) + "]");
  }
  const int sr = wave.sample_rate();
  const int frame_len = MsToSamples(config.frame_len_ms, sr);
  const FrameSequence frames =
      Frame(wave, frame_len, MsToSamples(config.frame_shift_ms, sr));
  const FilterBank bank =
      MelFilterbank(config.n_bands, NextPowerOfTwo(frame_len), sr, 0.0, sr / 2.0);
  const Eigen::MatrixXd energies = MelEnergies(frames, bank);

  McepSequence out;
  out.frame_shift_ms = config.frame_shift_ms;
  out.coeffs.resize(energies.rows(), config.order + 1);
  std::vector<double> log_bands(static_cast<std::size_t>(config.n_bands));
  for (Eigen::Index f = 0; f < energies.rows(); ++f) {
    for (int m = 0; m < config.n_bands; ++m) {
      log_bands[m] = std::log(std::max(energies(f, m), config.log_floor));
    }
    const std::vector<double> cep = DctII(log_bands, config.order + 1);
    for (int k = 0; k <= config.order; ++k) out.coeffs(f, k) = cep[k];
  }
  return out;
}

AlignmentPath DtwAlign(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() == 0 || b.rows() == 0) {
    throw Error(ErrorCode::kEmptyInput, "DTW needs two non-empty sequences");
  }
  if (a.cols() != b.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "DTW frames differ in dimension");
  }
  const Eigen::Index n = a.rows();
  const Eigen::Index m = b.rows();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd acc(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const double local = (a.row(i) - b.row(j)).norm();
      double best;
      if (i == 0 && j == 0) {
        best = 0.0;
      } else {
        const double diag = (i > 0 && j > 0) ? acc(i - 1, j - 1) : kInf;
        const double up = i > 0 ? acc(i - 1, j) : kInf;
        const double left = j > 0 ? acc(i, j - 1) : kInf;
        best = std::min({diag, up, left});
      }
      acc(i, j) = local + best;
    }
  }

  AlignmentPath path;
  path.total_cost = acc(n - 1, m - 1);
  Eigen::Index i = n - 1;
  Eigen::Index j = m - 1;
  path.pairs.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j)});
  while (i > 0 || j > 0) {
    const double diag = (i > 0 && j > 0) ? acc(i - 1, j - 1) : kInf;
    const double up = i > 0 ? acc(i - 1, j) : kInf;
    const double left = j > 0 ? acc(i, j - 1) : kInf;
    if (diag <= up && diag <= left) {
      --i;
      --j;
    } else if (up <= left) {
      --i;
    } else {
      --j;
    }
    path.pairs.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j)});
  }
  std::reverse(path.pairs.begin(), path.pairs.end());
  return path;
}

AlignmentPath DtwAlign(std::span<const double> a, std::span<const double> b) {
  const Eigen::Map<const Eigen::VectorXd> va(a.data(), static_cast<Eigen::Index>(a.size()));
  const Eigen::Map<const Eigen::VectorXd> vb(b.data(), static_cast<Eigen::Index>(b.size()));
  return DtwAlign(Eigen::MatrixXd(va), Eigen::MatrixXd(vb));
}

double McdFrame(std::span<const double> y, std::span<const double> y_hat) {
  if (y.size() != y_hat.size() || y.empty()) {
    throw Error(ErrorCode::kOrderMismatch, "MCD frames differ in dimension");
  }
  double acc = 0.0;
  for (std::size_t m = 0; m < y.size(); ++m) {
    const double d = y[m] - y_hat[m];
    acc += d * d;
  }
  return kMcdScale / static_cast<double>(y.size()) * std::sqrt(acc);
}

double Mcd(const McepSequence& a, const McepSequence& b, const McdConfig& config) {
  if (a.coeffs.cols() != b.coeffs.cols()) {
    throw Error(ErrorCode::kOrderMismatch,
                "MCEP orders " + std::to_string(a.order()) + " and " +
                    std::to_string(b.order()));
  }
  const Eigen::Index first = config.include_c0 ? 0 : 1;
  const Eigen::Index width = a.coeffs.cols() - first;
  if (width < 1) {
    throw Error(ErrorCode::kOrderMismatch, "no coefficients left to compare");
  }
  const Eigen::MatrixXd ya = a.coeffs.rightCols(width);
  const Eigen::MatrixXd yb = b.coeffs.rightCols(width);
  const AlignmentPath path = DtwAlign(ya, yb);
  double total = 0.0;
  std::vector<double> fa(static_cast<std::size_t>(width));
  std::vector<double> fb(static_cast<std::size_t>(width));
  for (const auto& p : path.pairs) {
    for (Eigen::Index k = 0; k < width; ++k) {
      fa[k] = ya(static_cast<Eigen::Index>(p.i), k);
      fb[k] = yb(static_cast<Eigen::Index>(p.j), k);
    }
    total += McdFrame(fa, fb);
  }
  return total / static_cast<double>(path.size());
}

double VoicedDuration(const F0Contour& contour, DdurMode mode) {
  const double shift_s = contour.frame_shift_ms / 1000.0;
  if (mode == DdurMode::kTotal) {
    return static_cast<double>(contour.voiced_count()) * shift_s;
  }
  const auto first = std::find(contour.voiced.begin(), contour.voiced.end(), true);
  if (first == contour.voiced.end()) return 0.0;
  const auto last = std::find(contour.voiced.rbegin(), contour.voiced.rend(), true);
  const auto span = (contour.voiced.rend() - last) - (first - contour.voiced.begin());
  return static_cast<double>(span) * shift_s;
}

double Ddur(const Waveform& converted, const Waveform& reference,
            const EvalConfig& config) {
  const double z = VoicedDuration(PitchContour(reference, config.pitch), config.ddur_mode);
  const double z_hat =
      VoicedDuration(PitchContour(converted, config.pitch), config.ddur_mode);
  return std::abs(z - z_hat);
}

namespace {

std::vector<ContourRow> RowsAlong(const AlignmentPath& path,
                                  const std::vector<double>& conv,
                                  const std::vector<double>& ref) {
  std::vector<ContourRow> rows;
  rows.reserve(path.size());
  for (const auto& p : path.pairs) {
    // Energy and F0 contours share framing, but guard against an off-by-one
    // from different analysis lengths.
    const std::size_t i = std::min(p.i, conv.size() - 1);
    const std::size_t j = std::min(p.j, ref.size() - 1);
    rows.push_back({p.i, p.j, conv[i], ref[j]});
  }
  return rows;
}

}  // namespace

EvaluationReport ContourReport(const Waveform& converted,
                               const Waveform& reference,
                               const EvalConfig& config) {
  const F0Contour f0_conv = PitchContour(converted, config.pitch);
  const F0Contour f0_ref = PitchContour(reference, config.pitch);
  const EnergyConfig energy_cfg{config.pitch.frame_len_ms, config.pitch.frame_shift_ms};
  const EnergyContour e_conv = ComputeEnergyContour(converted, energy_cfg);
  const EnergyContour e_ref = ComputeEnergyContour(reference, energy_cfg);

  const AlignmentPath f0_path = DtwAlign(f0_conv.f0_hz, f0_ref.f0_hz);
  const AlignmentPath energy_path = DtwAlign(e_conv.energy, e_ref.energy);

  EvaluationReport report;
  report.aligned_f0 = RowsAlong(f0_path, f0_conv.f0_hz, f0_ref.f0_hz);
  report.aligned_energy = RowsAlong(energy_path, e_conv.energy, e_ref.energy);
  report.energy_on_f0_path = RowsAlong(f0_path, e_conv.energy, e_ref.energy);
  report.n_aligned_frames = f0_path.size();
  report.mcd_db = Mcd(Mcep(converted, config.mcep), Mcep(reference, config.mcep),
                      config.mcd);
  report.ddur_s = std::abs(VoicedDuration(f0_ref, config.ddur_mode) -
                           VoicedDuration(f0_conv, config.ddur_mode));
  return report;
}

std::string ContourCsv(const EvaluationReport& report) {
  std::string out = "path_idx,i,j,f0_conv,f0_ref,energy_conv,energy_ref\n";
  for (std::size_t k = 0; k < report.aligned_f0.size(); ++k) {
    const ContourRow& f0 = report.aligned_f0[k];
    const ContourRow& en = report.energy_on_f0_path[k];
    out += std::to_string(k) + ',' + std::to_string(f0.i) + ',' +
           std::to_string(f0.j) + ',' + FormatDouble(f0.converted) + ',' +
           FormatDouble(f0.reference) + ',' + FormatDouble(en.converted) + ',' +
           FormatDouble(en.reference) + '\n';
  }
  return out;
}

std::string_view DdurModeName(DdurMode mode) {
  return mode == DdurMode::kTotal ? "total" : "span";
}

DdurMode ParseDdurMode(std::string_view name) {
  if (name == "total") return DdurMode::kTotal;
  if (name == "span") return DdurMode::kSpan;
  throw Error(ErrorCode::kInvalidParams,
              "ddur mode must be 'total' or 'span', got '" + std::string(name) + "'");
}

}  // namespace emoint
