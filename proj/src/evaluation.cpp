#include "typoscope/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "typoscope/error.hpp"
#include "typoscope/text.hpp"

namespace typoscope {

double eps_loss(double p_hat, double p_star, double eps) {
  return std::max(std::abs(p_hat - p_star) - eps, 0.0);
}

EvalReport aggregate_loss(const std::map<std::string, double>& pred,
                          const DirectionalityVector& gold, double eps) {
  EvalReport r;
  for (const auto& [rel, e] : gold.entries) {
    const auto it = pred.find(rel);
    if (it == pred.end()) throw DataError("no prediction for relation \"" + rel + "\"");
    RelationEval re;
    re.predicted = it->second;
    re.gold = e.p_right;
    re.rel_freq = e.rel_freq;
    re.contribution = e.rel_freq * eps_loss(it->second, e.p_right, eps);
    r.aggregate_loss += re.contribution;
    r.per_relation[rel] = re;
    r.scatter_rows.push_back({rel, gold.language_id, e.p_right, it->second, e.rel_freq});
  }
  return r;
}

double binary_accuracy(const std::map<std::string, double>& pred,
                       const DirectionalityVector& gold, int top_k) {
  std::vector<std::pair<std::string, const DirEntry*>> rels;
  rels.reserve(gold.entries.size());
  for (const auto& [rel, e] : gold.entries) rels.emplace_back(rel, &e);
  std::sort(rels.begin(), rels.end(), [](const auto& a, const auto& b) {
    if (a.second->rel_freq != b.second->rel_freq) return a.second->rel_freq > b.second->rel_freq;
    return a.first < b.first;
  });
  const std::size_t k = std::min<std::size_t>(rels.size(), static_cast<std::size_t>(top_k));
  if (k == 0) return 0.0;
  std::size_t agree = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const auto it = pred.find(rels[i].first);
    if (it == pred.end()) throw DataError("no prediction for relation \"" + rels[i].first + "\"");
    if (binary_label(it->second) == binary_label(rels[i].second->p_right)) ++agree;
  }
  return static_cast<double>(agree) / static_cast<double>(k);
}

EvalReport evaluate(const std::map<std::string, double>& pred, const DirectionalityVector& gold,
                    double eps, int top_k) {
  EvalReport r = aggregate_loss(pred, gold, eps);
  const int avail = static_cast<int>(gold.entries.size());
  r.binary_evaluated = std::min(avail, top_k);
  r.binary_truncated = avail < top_k;
  r.binary_accuracy = binary_accuracy(pred, gold, top_k);
  return r;
}

std::map<std::string, double> complete_predictions(const std::map<std::string, double>& pred,
                                                   const DirectionalityVector& gold,
                                                   double fallback) {
  std::map<std::string, double> out = pred;
  const auto unk = pred.find("UNK");
  for (const auto& [rel, e] : gold.entries) {
    (void)e;
    if (!out.count(rel)) out[rel] = unk != pred.end() ? unk->second : fallback;
  }
  return out;
}

void write_report_summary(const EvalReport& r, double eps, std::ostream& out) {
  out << "typoscope\teval-summary\t1.0\n";
  out << "eps\t" << fmt_double(eps) << "\n";
  out << "aggregate_loss\t" << fmt_double(r.aggregate_loss) << "\n";
  out << "binary_accuracy\t" << fmt_double(r.binary_accuracy) << "\n";
  out << "binary_evaluated\t" << r.binary_evaluated << "\n";
  out << "binary_truncated\t" << (r.binary_truncated ? "true" : "false") << "\n";
  out << "relations\t" << r.per_relation.size() << "\n";
}

void write_report_relations_tsv(const EvalReport& r, std::ostream& out) {
  for (const auto& [rel, e] : r.per_relation) {
    out << rel << "\t" << fmt_double(e.contribution) << "\t" << fmt_double(e.predicted) << "\t"
        << fmt_double(e.gold) << "\t" << fmt_double(e.rel_freq) << "\n";
  }
}

void write_report_scatter_tsv(const EvalReport& r, std::ostream& out) {
  for (const auto& row : r.scatter_rows) {
    out << row.relation << "\t" << row.language << "\t" << fmt_double(row.gold_p) << "\t"
        << fmt_double(row.predicted_p) << "\t" << fmt_double(row.weight) << "\n";
  }
}

}  // namespace typoscope
