#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"
#include "freestate/smap.hpp"

namespace freestate::cli {

// Each command writes plain text to out and throws the library's exceptions
// on bad input; main maps those to exit codes.

void cmd_invert_s(const std::vector<double>& s, const InvertOptions& opts, std::ostream& out);
void cmd_spectrum(const std::vector<double>& c, bool universal, std::ostream& out);
// words use the signed-token format; "" is the identity.
void cmd_state(const JobConfig& cfg, const std::vector<std::string>& words, std::ostream& out);
void cmd_gram(const JobConfig& cfg, int k, bool print_matrix, std::ostream& out);
void cmd_boundary(const JobConfig& cfg, const std::vector<std::string>& words, std::ostream& out);

}  // namespace freestate::cli
