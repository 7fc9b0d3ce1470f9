import pytest

from liftsim import bvh, demo


@pytest.fixture(scope="session", autouse=True)
def compiled_kernels():
    bvh.warm_up()


@pytest.fixture(scope="session")
def crane():
    return demo.demo_crane()


@pytest.fixture(scope="session")
def chart():
    return demo.demo_chart()


@pytest.fixture(scope="session")
def scene():
    return demo.demo_scene()


@pytest.fixture(scope="session")
def demo_assets(tmp_path_factory):
    directory = tmp_path_factory.mktemp("demo-assets")
    return demo.write_demo(directory)
