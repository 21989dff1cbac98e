#include <iostream>

#include "fitzkit/app.hpp"

int main(int argc, char** argv) { return fitzkit::app::run(argc, argv, std::cout, std::cerr); }
