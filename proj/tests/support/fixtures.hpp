#pragma once

#include <string>

#include "morphsynth/instance_io.hpp"

namespace testsupport {

inline std::string fixture_path(const std::string& name) {
  return std::string(MORPHSYNTH_FIXTURES_DIR) + "/" + name + ".json";
}

inline morphsynth::Instance load_fixture(const std::string& name) {
  return morphsynth::load_instance_file(fixture_path(name));
}

}  // namespace testsupport
