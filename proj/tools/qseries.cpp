#include <iostream>

#include "qseries_app.hpp"

int main(int argc, char** argv) { return qseries::app::run(argc, argv, std::cout, std::cerr); }
