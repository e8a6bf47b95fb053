#pragma once

#include <string>

#include "lucent/dsl.h"

namespace lucent::testing {

inline MarkedNet corpus(const std::string &stem)
{
	return load_net(std::string(LUCENT_NETS_DIR) + "/" + stem + ".net");
}

inline std::string corpus_path(const std::string &stem)
{
	return std::string(LUCENT_NETS_DIR) + "/" + stem + ".net";
}

} // namespace lucent::testing
