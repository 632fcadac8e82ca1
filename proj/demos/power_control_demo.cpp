// Admission control for three links where link 0 interferes strongly with links 1 and 2.

#include <iostream>

#include "ssqp/ssqp.hpp"

int main()
{
  ssqp::Matrix gains(3, 3);
  gains << 1.0, 0.1, 0.1,
           5.0, 1.0, 0.1,
           5.0, 0.1, 1.0;
  const ssqp::Vector noise = ssqp::Vector::Constant(3, 0.1);
  const ssqp::ProblemSpec p = ssqp::make_power_control(gains, noise, 1e-3, 0.1);

  ssqp::SolverConfig cfg;
  cfg.epsilon = 1e-3;
  cfg.step_mode = ssqp::StepMode::exact;
  const ssqp::SolveResult r = ssqp::solve(p, *p.x0, cfg);

  const ssqp::Vector slack = p.residual(r.x_final);
  int admitted = 0;
  for (Eigen::Index k = 0; k < slack.size(); ++k) {
    const bool ok = slack(k) <= 1e-6;
    admitted += ok ? 1 : 0;
    std::cout << "link " << k << ": power " << r.x_final(k) << (ok ? "  admitted" : "  dropped") << '\n';
  }
  std::cout << admitted << " of 3 links supported; best possible " << ssqp::max_admissible_links(p) << '\n';
  return 0;
}
