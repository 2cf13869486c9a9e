#include "plevt/sorted_sample.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "plevt/error.hpp"

namespace plevt {

SortedSample SortedSample::from_unsorted(std::vector<double> values,
                                         SampleOrigin origin) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      std::ostringstream msg;
      msg << "sample value at position " << i + 1 << " is not finite";
      throw DomainError(msg.str());
    }
  }
  std::sort(values.begin(), values.end());
  return SortedSample(std::move(values), std::move(origin));
}

SortedSample SortedSample::top(std::size_t m) const {
  if (m > values_.size()) m = values_.size();
  return SortedSample(
      std::vector<double>(values_.end() - static_cast<std::ptrdiff_t>(m),
                          values_.end()),
      origin_);
}

}  // namespace plevt
