#ifndef TNSLICE_COMPARE_HPP
#define TNSLICE_COMPARE_HPP

#include <string>
#include <vector>

namespace tnslice {

struct CompareReport
{
  std::size_t filesCompared = 0;
  std::size_t valuesCompared = 0;
  std::vector<std::string> problems;

  bool Ok () const { return problems.empty () && filesCompared > 0; }
};

// Compares every exported file of `golden` with its namesake in `out`. A value
// deviates when |out - golden| exceeds tolerancePct of |golden| and also the
// export resolution (0.001). Only windows present in both files are matched.
CompareReport CompareDirs (const std::string &out, const std::string &golden, double tolerancePct);

} // namespace tnslice

#endif
