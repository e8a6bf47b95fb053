#include <iostream>

#include "lucent/cli.h"

int main(int argc, char **argv)
{
	return lucent::run_cli(argc, argv, std::cout, std::cerr);
}
