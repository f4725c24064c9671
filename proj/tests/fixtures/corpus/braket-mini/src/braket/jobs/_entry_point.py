import os

import dill


def run_job():
    job_args_path = os.environ["AMZN_BRAKET_JOB_ARGS"]
    job_args = dill.load(open(job_args_path, "rb"))
    return job_args
