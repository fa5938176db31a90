from dpfacility.utils import log_running_time


def test_log_running_time():
    @log_running_time(fn_name="double")
    def double(x):
        return 2 * x, {"double": {"input": x}}

    result, log = double(3)

    assert result == 6
    assert log["double"]["input"] == 3
    assert log["double"]["running_time"].endswith(" s")
    assert double.__name__ == "double"
