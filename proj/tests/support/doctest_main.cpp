#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <spdlog/cfg/env.h>
#include <spdlog/spdlog.h>

// Library logging is off unless SPDLOG_LEVEL asks for it.
int main(int argc, char** argv)
{
  spdlog::set_level(spdlog::level::off);
  spdlog::cfg::load_env_levels();
  return doctest::Context(argc, argv).run();
}
