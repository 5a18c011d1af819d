#include "sbp/records.hpp"

#include <fstream>

namespace sbp {

nlohmann::json record_to_json(const SolutionRecord& rec, const std::string& field_path) {
  nlohmann::json j;
  j["field"] = field_path;
  j["lambda"] = rec.lambda;
  j["energy"] = rec.energy;
  j["constraint"] = rec.constraint;
  j["residual"] = rec.residual;
  j["barycenter"] = {rec.barycenter[0], rec.barycenter[1], rec.barycenter[2]};
  j["sign_class"] = to_string(rec.sign_class);
  j["iterations"] = rec.iterations;
  j["converged"] = rec.converged;
  if (rec.morse_index) j["morse_index"] = *rec.morse_index;
  return j;
}

nlohmann::json spectrum_to_json(const SpectrumReport& rep) {
  nlohmann::json j;
  j["eigenvalues"] = rep.eigenvalues;
  j["eigen_residuals"] = rep.eigen_residuals;
  j["morse_index"] = rep.morse_index;
  j["tol_eig"] = rep.tol_eig;
  j["operator_norm"] = rep.operator_norm;
  j["index_may_exceed_k"] = rep.index_may_exceed_k;
  j["stagnated"] = rep.stagnated;
  return j;
}

void append_record_line(const std::string& path, const nlohmann::json& j) {
  std::ofstream os(path, std::ios::app);
  if (!os) throw std::runtime_error("cannot open record file: " + path);
  os << j.dump() << "\n";
}

}  // namespace sbp
