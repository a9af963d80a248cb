import json
import os

from starkres.cli import EXIT_OK, run_command


def test_threads_do_not_change_resonances(tmpdir, singular_config_dict):
    path = os.path.join(str(tmpdir), "config.json")
    with open(path, "w") as outfile:
        json.dump(singular_config_dict, outfile)

    outputs = []
    for threads in ("1", "4"):
        prefix = os.path.join(str(tmpdir), "res" + threads)
        argv = ["resonances", "--config", path, "--n", "10..16", "--threads", threads, "--output", prefix, "-q"]
        assert run_command(argv) == EXIT_OK
        with open(prefix + ".csv", "rb") as infile:
            outputs.append(infile.read())
    assert outputs[0] == outputs[1]
