#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "typoscope/typology.hpp"

namespace typoscope {

// max(|p_hat - p_star| - eps, 0)
double eps_loss(double p_hat, double p_star, double eps);

struct RelationEval {
  double contribution = 0.0;  // rel_freq * eps_loss
  double predicted = 0.0;
  double gold = 0.0;
  double rel_freq = 0.0;
};

struct ScatterRow {
  std::string relation;
  std::string language;
  double gold_p = 0.0;
  double predicted_p = 0.0;
  double weight = 0.0;  // the relation's frequency in the gold treebank
};

struct EvalReport {
  double aggregate_loss = 0.0;
  std::map<std::string, RelationEval> per_relation;
  double binary_accuracy = 0.0;
  int binary_evaluated = 0;      // how many relations entered the binary score
  bool binary_truncated = false; // true when fewer than top_k relations existed
  std::vector<ScatterRow> scatter_rows;
};

// Frequency-weighted expected loss over the gold relation inventory.  Every
// gold relation must have a prediction; the model layer is responsible for
// supplying UNK fallbacks beforehand.
EvalReport aggregate_loss(const std::map<std::string, double>& pred,
                          const DirectionalityVector& gold, double eps);

// Fraction of the top_k most frequent gold relations (ties broken
// lexicographically) whose predicted side of 0.5 matches the gold side.
double binary_accuracy(const std::map<std::string, double>& pred,
                       const DirectionalityVector& gold, int top_k);

// aggregate_loss + binary_accuracy in one report.
EvalReport evaluate(const std::map<std::string, double>& pred, const DirectionalityVector& gold,
                    double eps, int top_k = 20);

// Fills in missing gold relations from the prediction map's UNK entry (or a
// fixed fallback when there is none, e.g. 0.5 for the EC baseline).
std::map<std::string, double> complete_predictions(const std::map<std::string, double>& pred,
                                                   const DirectionalityVector& gold,
                                                   double fallback = 0.5);

void write_report_summary(const EvalReport& r, double eps, std::ostream& out);
void write_report_relations_tsv(const EvalReport& r, std::ostream& out);
void write_report_scatter_tsv(const EvalReport& r, std::ostream& out);

}  // namespace typoscope
