#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "parafusion/subgroup.hpp"
#include "parafusion/verdict.hpp"

namespace parafusion {

/// Parses {"degree": n, "generators": ["(1 2 3)", ...]}. Throws ParseError.
GroupPtr parse_group(std::string_view text);
GroupPtr load_group_file(std::string const& path);

/// Generators separated by commas, e.g. "(1 2)(3 4), (1 3)". Empty text is the trivial subgroup.
Subgroup parse_subgroup(GroupPtr const& g, std::string_view text);

std::vector<std::string> generator_strings(Subgroup const& h);
Json group_json(GroupPtr const& g);

}  // namespace parafusion
