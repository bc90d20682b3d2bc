#include "hetsync/errors.hpp"

#include <sstream>

namespace hetsync {
namespace {

std::string describe_gap(int block_a, int index_a, int block_b, int index_b, double gap,
                         const std::string& context) {
  std::ostringstream os;
  if (!context.empty()) os << context << ": ";
  os << "degenerate eigenvalue gap " << gap << " between (block " << block_a << ", index "
     << index_a << ") and (block " << block_b << ", index " << index_b
     << "); second-order expansion is invalid here";
  return os.str();
}

}  // namespace

DegenerateGap::DegenerateGap(int block_a, int index_a, int block_b, int index_b, double gap,
                             const std::string& context)
    : NumericalError(describe_gap(block_a, index_a, block_b, index_b, gap, context)),
      block_a_(block_a),
      index_a_(index_a),
      block_b_(block_b),
      index_b_(index_b),
      gap_(gap) {}

}  // namespace hetsync
