#define CATCH_AMALGAMATED_CUSTOM_MAIN
#include <catch2/catch_amalgamated.hpp>

#include <odm/numeric.hpp>

int main(int argc, char** argv) {
    odm::set_precision_bits(odm::default_precision_bits());
    return Catch::Session().run(argc, argv);
}
