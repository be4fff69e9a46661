#include "bsen/model.hpp"

#include "bsen/error.hpp"

namespace bsen {

void BsenConfig::validate() const {
  if (input_dims.nx < 8 || input_dims.ny < 8 || input_dims.nz < 8 || input_dims.nx % 8 ||
      input_dims.ny % 8 || input_dims.nz % 8)
    throw DataError("input dims " + to_string(input_dims) +
                    " must be divisible by 8 (three 2x poolings)");
  for (int c : encoder_channels)
    if (c < 1) throw DataError("encoder channels must be >= 1");
  if (alpha < 0) throw DataError("alpha must be >= 0");
  if (delta <= 0) throw DataError("delta must be > 0");
  if (batch_size < 1) throw DataError("batch size must be >= 1");
  if (epochs_stage1 < 0 || epochs_stage2 < 0) throw DataError("epochs must be >= 0");
  if (lr_stage1 <= 0 || lr_stage2 <= 0) throw DataError("learning rates must be > 0");
  if (center_momentum < 0 || center_momentum > 1)
    throw DataError("center momentum must be in [0,1]");
}

}  // namespace bsen
