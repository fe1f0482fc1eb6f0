class Base(object):
    """Class for qvolume record objects."""
    # pylint: disable=too-few-public-methods

    def __init__(self, name=None):
        self.__name = name

    @property
    def name(self):
        return self.__name

    def to_dict(self):
        return {"name": self.name}
