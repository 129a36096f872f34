from setuptools import setup, find_packages

setup(name='evocar',
      version=open("evocar/_version.py").readlines()[-1].split()[-1].strip("\"'"),
      description='evolutionary neural-network collision avoidance for simulated vehicles',
      packages=find_packages(exclude=["tests", "tests.*"]),
      install_requires=["numpy", "tqdm", "matplotlib"],
      entry_points={"console_scripts": ["evocar = evocar.cli:main"]},
     )
