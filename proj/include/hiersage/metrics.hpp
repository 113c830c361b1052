#pragma once

#include <span>
#include <vector>

#include "hiersage/error.hpp"

namespace hiersage {

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct Metrics {
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  std::size_t correct = 0;
  std::size_t total = 0;
  std::vector<ClassScores> per_class;
  std::vector<std::vector<std::size_t>> confusion;  // [truth][predicted]
};

/// Single-label multiclass scores; micro-F1 pools TP/FP/FN over classes.
inline Metrics score_predictions(std::span<const int> predicted, std::span<const int> truth, std::size_t num_classes) {
  if (predicted.size() != truth.size()) throw Error("prediction and truth lengths differ");
  Metrics m;
  m.confusion.assign(num_classes, std::vector<std::size_t>(num_classes, 0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || static_cast<std::size_t>(truth[i]) >= num_classes || predicted[i] < 0 ||
        static_cast<std::size_t>(predicted[i]) >= num_classes)
      throw Error("class id out of range in scoring");
    ++m.confusion[static_cast<std::size_t>(truth[i])][static_cast<std::size_t>(predicted[i])];
  }
  std::size_t tp = 0, fp = 0, fn = 0;
  m.per_class.resize(num_classes);
  double macro = 0.0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    std::size_t tpc = m.confusion[c][c], fpc = 0, fnc = 0;
    for (std::size_t o = 0; o < num_classes; ++o) {
      if (o == c) continue;
      fpc += m.confusion[o][c];
      fnc += m.confusion[c][o];
    }
    tp += tpc;
    fp += fpc;
    fn += fnc;
    auto& s = m.per_class[c];
    s.support = tpc + fnc;
    s.precision = tpc + fpc ? static_cast<double>(tpc) / static_cast<double>(tpc + fpc) : 0.0;
    s.recall = tpc + fnc ? static_cast<double>(tpc) / static_cast<double>(tpc + fnc) : 0.0;
    s.f1 = tpc ? 2.0 * static_cast<double>(tpc) / static_cast<double>(2 * tpc + fpc + fnc) : 0.0;
    macro += s.f1;
  }
  m.correct = tp;
  m.total = truth.size();
  m.micro_f1 = tp ? 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn) : 0.0;
  m.macro_f1 = num_classes ? macro / static_cast<double>(num_classes) : 0.0;
  return m;
}

}  // namespace hiersage
