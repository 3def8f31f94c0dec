#include "sccm/grid.hpp"

#include <cmath>
#include <queue>

namespace sccm {

Eigen::MatrixXd build_admittance(const NetworkCase& c, const std::vector<int>& commitment) {
  if (commitment.size() != c.sgs.size())
    throw Error("commitment length " + std::to_string(commitment.size()) + " != number of SGs " +
                std::to_string(c.sgs.size()));
  const int n = static_cast<int>(c.buses.size());
  Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(n, n);
  std::vector<std::vector<int>> adj(n);
  for (const auto& br : c.branches) {
    int a = c.bus_index(br.from), b = c.bus_index(br.to);
    double y = br.x / (br.r * br.r + br.x * br.x);  // |Im(1/(r+jx))|, = 1/x when r = 0
    Y(a, a) += y;
    Y(b, b) += y;
    Y(a, b) -= y;
    Y(b, a) -= y;
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<char> seen(n, 0);
  std::queue<int> q;
  if (n > 0) { q.push(0); seen[0] = 1; }
  int reached = n > 0 ? 1 : 0;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int w : adj[v])
      if (!seen[w]) { seen[w] = 1; ++reached; q.push(w); }
  }
  if (reached != n) throw DisconnectedNetwork("network is not connected");

  for (int i = 0; i < n; ++i) Y(i, i) += c.buses[i].shunt_b;
  for (size_t g = 0; g < c.sgs.size(); ++g)
    if (commitment[g]) {
      int b = c.bus_index(c.sgs[g].bus);
      Y(b, b) += 1.0 / c.sgs[g].x_internal;
    }
  return Y;
}

Eigen::MatrixXd impedance_matrix(const Eigen::MatrixXd& Y) {
  const auto n = Y.rows();
  if (n == 0 || Y.cols() != n) throw Error("admittance matrix must be square and non-empty");
  // A grounded network has a strictly positive row sum somewhere; a floating one sums to zero.
  double ground = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) ground += Y.row(i).sum();
  if (ground <= 1e-12 * Y.diagonal().cwiseAbs().maxCoeff())
    throw NoGroundingPath("no online SG or shunt provides a path to ground");
  Eigen::LLT<Eigen::MatrixXd> llt(Y);
  if (llt.info() != Eigen::Success) throw NoGroundingPath("admittance matrix is singular");
  Eigen::MatrixXd Z = llt.solve(Eigen::MatrixXd::Identity(n, n));
  Z = 0.5 * (Z + Z.transpose()).eval();
  double res = inverse_residual(Y, Z);
  if (!(res <= 1e-8)) throw NumericalError("impedance residual " + std::to_string(res) + " exceeds 1e-8");
  return Z;
}

double inverse_residual(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& Z) {
  Eigen::MatrixXd R = Y * Z - Eigen::MatrixXd::Identity(Y.rows(), Y.cols());
  return R.cwiseAbs().rowwise().sum().maxCoeff();
}

std::vector<double> exact_scc_all(const NetworkCase& c, const std::vector<int>& commitment,
                                  const std::vector<double>& alpha) {
  if (alpha.size() != c.ibrs.size()) throw Error("capacity factor vector does not match IBR fleet");
  Eigen::MatrixXd Z = impedance_matrix(build_admittance(c, commitment));
  const int n = static_cast<int>(c.buses.size());
  Eigen::VectorXd inj = Eigen::VectorXd::Zero(n);
  for (size_t g = 0; g < c.sgs.size(); ++g)
    if (commitment[g]) inj(c.bus_index(c.sgs[g].bus)) += c.sgs[g].scc_injection;
  for (size_t k = 0; k < c.ibrs.size(); ++k)
    inj(c.bus_index(c.ibrs[k].bus)) += c.ibrs[k].scc_injection * alpha[k];
  Eigen::VectorXd num = Z * inj;
  std::vector<double> out(n);
  for (int b = 0; b < n; ++b) out[b] = std::max(0.0, num(b) / Z(b, b));
  return out;
}

double exact_scc(const NetworkCase& c, const std::vector<int>& commitment,
                 const std::vector<double>& alpha, int bus_id) {
  return exact_scc_all(c, commitment, alpha)[c.bus_index(bus_id)];
}

std::vector<double> exact_scc_or_zero(const NetworkCase& c, const std::vector<int>& commitment,
                                      const std::vector<double>& alpha) {
  try {
    return exact_scc_all(c, commitment, alpha);
  } catch (const NoGroundingPath&) {
    return std::vector<double>(c.buses.size(), 0.0);
  }
}

}  // namespace sccm
