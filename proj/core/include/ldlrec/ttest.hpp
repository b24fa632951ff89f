#ifndef LDLREC_TTEST_HPP
#define LDLREC_TTEST_HPP

#include <vector>

namespace ldlrec {

struct TTestResult {
  double t_stat = 0.0;
  double p_value = 0.5;
  bool significant = false;
};

// Lower-tail paired test of H1: mean(a - b) < 0, i.e. "a scores lower than b".
// t on n-1 degrees of freedom; p from the Student-t CDF. Degenerate inputs:
// zero variance with zero mean difference gives (t=0, p=0.5, not significant);
// zero variance with a nonzero mean gives t = +/-inf and p in {0, 1}.
TTestResult paired_ttest_one_sided(const std::vector<double>& scores_a,
                                   const std::vector<double>& scores_b, double level);

// P(T <= t) for Student's t with dof degrees of freedom, computed through the
// regularized incomplete beta function.
double student_t_cdf(double t, double dof);

double regularized_incomplete_beta(double a, double b, double x);

}  // namespace ldlrec

#endif
