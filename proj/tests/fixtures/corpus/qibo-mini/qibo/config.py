import yaml


def load_runcard(path):
    with open(path) as stream:
        return yaml.load(stream, Loader=yaml.FullLoader)
