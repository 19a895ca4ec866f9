#pragma once

#include <iosfwd>
#include <string>

#include "sts/core.hpp"

namespace sts {

// File format (UTF-8 JSON):
//   {"points":["p1",...],"blocks":[["a","b","c"],...]}
// Block member order and block order are insignificant on input. Canonical
// output sorts points lexicographically and blocks member- and list-wise.

PartialSts read_system(std::istream& in);
PartialSts read_system_file(const std::string& path);

std::string to_canonical_json(const PartialSts& s);
void write_system_file(const PartialSts& s, const std::string& path);

}  // namespace sts
