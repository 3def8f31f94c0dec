#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sccm/case.hpp"

namespace sccm {

// Susceptance-magnitude nodal matrix; online SGs add 1/x'' to their bus diagonal.
// Dense, O(n^3) to invert; intended for a few hundred buses at most.
Eigen::MatrixXd build_admittance(const NetworkCase& c, const std::vector<int>& commitment);

// Z = Y^-1, symmetric; throws NoGroundingPath when Y has no path to ground.
Eigen::MatrixXd impedance_matrix(const Eigen::MatrixXd& Y);

double inverse_residual(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& Z);

// SCC at every bus (index order of c.buses)
std::vector<double> exact_scc_all(const NetworkCase& c, const std::vector<int>& commitment,
                                  const std::vector<double>& alpha);

double exact_scc(const NetworkCase& c, const std::vector<int>& commitment,
                 const std::vector<double>& alpha, int bus_id);

// SCC at every bus with an all-off, shunt-free network mapped to zero
std::vector<double> exact_scc_or_zero(const NetworkCase& c, const std::vector<int>& commitment,
                                      const std::vector<double>& alpha);

}  // namespace sccm
