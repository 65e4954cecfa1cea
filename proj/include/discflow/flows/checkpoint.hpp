#pragma once

#include <string>

#include "discflow/flows/dequant.hpp"
#include "discflow/flows/stack.hpp"

namespace discflow::flows {

// Flow checkpoint: a small header with the layer schedule (kinds, masks,
// dims, grid levels) followed by the conditioner parameter blocks in the
// numcore binary format. Byte-exact round trip.
struct FlowModel {
  FlowStack tphi;
  DequantFlow tlambda;
};

void save_checkpoint(const std::string& path, const FlowModel& model);
FlowModel load_checkpoint(const std::string& path);

}  // namespace discflow::flows
