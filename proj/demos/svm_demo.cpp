// Trains a hinge-loss SVM (q = 1) on six points and prints the separating line.

#include <iostream>
#include <vector>

#include "ssqp/ssqp.hpp"

int main()
{
  using ssqp::Vector;
  std::vector<Vector> pts;
  std::vector<double> labels;
  const double raw[6][3] = {{2.0, 2.0, 1}, {3.0, 1.5, 1}, {2.5, 3.0, 1}, {-1.0, -2.0, -1}, {-2.0, -1.0, -1}, {-1.5, -2.5, -1}};
  for (const auto & r : raw) {
    Vector s(2);
    s << r[0], r[1];
    pts.push_back(s);
    labels.push_back(r[2]);
  }
  const ssqp::ProblemSpec p = ssqp::make_svm(pts, labels, 0.1, 1.0);

  ssqp::SolverConfig cfg;
  cfg.epsilon = 1e-3;
  cfg.step_mode = ssqp::StepMode::exact;
  const ssqp::SolveResult r = ssqp::solve(p, *p.x0, cfg);

  std::cout << "w = (" << r.x_final(0) << ", " << r.x_final(1) << "), bias = " << r.x_final(2) << '\n';
  std::cout << "QP solves: " << r.qp_solves << " (a-priori bound " << r.bound << ")\n";
  const Vector margins = p.A * r.x_final;
  for (Eigen::Index m = 0; m < margins.size(); ++m) { std::cout << "margin[" << m << "] = " << margins(m) << '\n'; }
  std::cout << "certificate: " << (r.kkt.pass ? "pass" : "fail") << '\n';
  return r.kkt.pass ? 0 : 1;
}
