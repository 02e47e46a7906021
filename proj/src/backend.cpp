#include "promptevo/backend.hpp"

#include "promptevo/errors.hpp"

namespace promptevo {

void GenerationParams::validate() const {
    if (num_return < 1) {
        throw Error(ErrorCode::config_invalid, "num_return must be >= 1");
    }
    if (beam_size < 1) {
        throw Error(ErrorCode::config_invalid, "beam_size must be >= 1");
    }
    if (num_return > beam_size) {
        throw Error(ErrorCode::config_invalid, "num_return must not exceed beam_size");
    }
    if (!(temperature > 0.0)) {
        throw Error(ErrorCode::config_invalid, "temperature must be > 0");
    }
    if (!(top_p > 0.0) || top_p > 1.0) {
        throw Error(ErrorCode::config_invalid, "top_p must be in (0, 1]");
    }
    if (no_repeat_ngram < 0) {
        throw Error(ErrorCode::config_invalid, "no_repeat_ngram must be >= 0");
    }
}

}  // namespace promptevo
